"""
Integer Lift Models
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from potentia.models.polynomial import GaussianIntPoly
from potentia.models.scalar import GaussianRational


class LiftParams(BaseModel):
    K: int
    m: int
    a: int
    b: Optional[int] = None
    c: int
    R2: Optional[float] = None


class LiftCertificate(BaseModel):
    """
    Result of lifting P^c to a monic Gaussian-integer polynomial Gamma.

    `lambdas[i-1][j-1]` is the correction attached to z^(K-j) P^(c-a-i).
    The margin is a sampled quantity, not a rigorous bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    gamma: GaussianIntPoly
    lambdas: List[List[GaussianRational]]
    params: LiftParams
    rouche_margin: Optional[float] = None
    analytic_bound: Optional[float] = None
    certified: bool = False
    certified_half: bool = False
    zero_counts: Optional[List[int]] = None
    zeros_inside: Optional[int] = None

    @field_serializer("gamma")
    def _gamma_json(self, gamma: GaussianIntPoly) -> List[str]:
        return gamma.to_json()

    @field_serializer("lambdas")
    def _lambdas_json(self, lambdas: List[List[GaussianRational]]) -> List[List[str]]:
        return [[str(x) for x in row] for row in lambdas]


class LiftCertificateOut(BaseModel):
    """Serialized certificate; big integers travel as decimal strings."""

    gamma: List[str]
    lambdas: List[List[str]]
    params: LiftParams
    rouche_margin: Optional[float] = None
    analytic_bound: Optional[float] = None
    certified: bool
    certified_half: bool = False
    zero_counts: Optional[List[int]] = None
    zeros_inside: Optional[int] = None


class PipelineStage(BaseModel):
    n: int
    degree: int
    P: List[str] = Field(..., description="Rational composition P_n, ascending")
    gamma: Optional[List[str]] = None
    c: Optional[int] = None
    integral: bool = False
    rouche_margin: Optional[float] = None
    certified: bool = False
    moment_distance: Optional[float] = None
    potential_gap: Optional[float] = None
    band_counts: List[int] = Field(default_factory=list)
    capacity_estimate: float
    note: Optional[str] = None


class PipelineReport(BaseModel):
    endpoints: List[float]
    capacity: float
    jacobi: Dict[str, object]
    stages: List[PipelineStage]
    distances_non_increasing: bool
