"""
Calibration Result Models
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field


class CalibrationData(BaseModel):
    """Green differential data of a band set."""

    endpoints: List[float]
    q_coeffs: List[float] = Field(..., description="Structure polynomial prod (z - e_i), ascending")
    R_coeffs: List[float] = Field(..., description="Monic degree r-1 numerator, ascending")
    lambdas: List[float] = Field(default_factory=list, description="Roots of R, one per gap")
    omega: List[float] = Field(default_factory=list, description="Harmonic measures of the bands")
    omega_signs: List[int] = Field(default_factory=list, description="Sign of each band period before taking |.|")
    N: Optional[int] = None
    n_k: Optional[List[int]] = None
    max_inflation: float = 0.0
    iterations: int = 0

    @property
    def r(self) -> int:
        return len(self.endpoints) // 2


class GreenEvaluation(BaseModel):
    z: Tuple[float, float]
    g: float = Field(..., ge=0)
    robin: float
