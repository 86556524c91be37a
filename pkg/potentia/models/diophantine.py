"""
Diophantine Models
"""
import math
from typing import List, Tuple

from pydantic import BaseModel, Field, field_validator

from potentia.exceptions import InvalidInputError


class CoeffBox(BaseModel):
    """
    Integer box |a_k| <= bounds[k] for the coefficients a_0..a_n of a degree-n
    polynomial (ascending order).
    """

    n: int = Field(..., ge=0)
    bounds: List[int]

    @field_validator("bounds")
    @classmethod
    def _nonnegative(cls, v: List[int]) -> List[int]:
        if any(b < 0 for b in v):
            raise ValueError("coefficient bounds must be nonnegative")
        return v

    def model_post_init(self, __context) -> None:
        if len(self.bounds) != self.n + 1:
            raise InvalidInputError(f"A degree-{self.n} box needs {self.n + 1} bounds, got {len(self.bounds)}")

    @classmethod
    def uniform(cls, n: int, bound: int) -> "CoeffBox":
        return cls(n=n, bounds=[bound] * (n + 1))

    @classmethod
    def from_radius(cls, n: int, rho: float) -> "CoeffBox":
        """|a_{n-k}| <= C(n,k) rho^k for a monic polynomial with roots in |z| <= rho."""
        bounds = [0] * (n + 1)
        for k in range(n + 1):
            bounds[n - k] = int(math.floor(math.comb(n, k) * rho ** k + 1e-9))
        bounds[n] = 1
        return cls(n=n, bounds=bounds)

    @classmethod
    def from_lagrange(cls, K, n: int) -> "CoeffBox":
        from potentia.services.diophantine_service import diophantine_service
        return diophantine_service.lagrange_box(K, n)

    @property
    def size(self) -> int:
        total = 1
        for b in self.bounds:
            total *= 2 * b + 1
        return total

    @property
    def monic_size(self) -> int:
        total = 1
        for b in self.bounds[:-1]:
            total *= 2 * b + 1
        return total

    def doubled(self) -> "CoeffBox":
        return CoeffBox(n=self.n, bounds=[2 * b for b in self.bounds])


class SmallNormPolynomial(BaseModel):
    coeffs: List[int] = Field(..., description="a_0..a_n")
    sup_norm: float


class NearestConjugateResult(BaseModel):
    coeffs: List[int]
    distance: float
    roots: List[Tuple[float, float]]
    note: str = ""
