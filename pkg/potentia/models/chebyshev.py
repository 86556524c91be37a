"""
Chebyshev Result Models
"""
from typing import List

from pydantic import BaseModel, Field


class EquioscillationReport(BaseModel):
    norm: float = Field(..., description="Sup of |p| over the set")
    alternation_points: List[float]
    alternation_count: int
    alternation_signs: List[int] = Field(default_factory=list, description="Sign of p at each alternation point")
    zero_gaps: List[float] = Field(default_factory=list, description="Distances between consecutive zeros inside a band")
    band_zero_gaps: List[float] = Field(default_factory=list, description="Largest zero gap per band")
