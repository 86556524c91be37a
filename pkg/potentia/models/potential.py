"""
Potential Theory Result Models
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field


class CapacityScheme(str, Enum):
    FEKETE_EXTRAPOLATION = "fekete_extrapolation"
    JACOBI_FORMULA = "jacobi_formula"
    ROBIN_CONSTANT = "robin_constant"


class FeketeResult(BaseModel):
    """Locally optimal n-point Fekete configuration on a discretized set."""

    points: List[Tuple[float, float]] = Field(..., description="Selected points as (re, im), sorted lexicographically")
    pairwise_product: float = Field(..., description="q_n = prod_{i != j} |z_i - z_j|")
    log_pairwise_product: float = Field(..., description="ln q_n, finite even when q_n under/overflows")
    d_n: float = Field(..., description="q_n^(1/(n(n-1)))")
    grid_size: int
    sweeps: int = 0

    @property
    def n(self) -> int:
        return len(self.points)

    def complex_points(self) -> List[complex]:
        return [complex(x, y) for x, y in self.points]


class CapacityEstimate(BaseModel):
    value: float = Field(..., ge=0)
    scheme: CapacityScheme
    n_used: int = 0
    error_bound: Optional[float] = None
    diameters: List[float] = Field(default_factory=list, description="d_n sequence behind an extrapolation")


class MeasureDistance(BaseModel):
    moment_distance: float
    potential_gap: float
    moments: int
