"""
Periodic Jacobi data and band spectra
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.scalar import GaussianRational


@dataclass(frozen=True)
class PeriodicJacobi:
    """
    Period-r two-sided Jacobi matrix, a_{n+r} = a_n and b_{n+r} = b_n.

    Entries are held exactly; float input keeps its binary value.
    """

    diag: Tuple[GaussianRational, ...]
    offdiag: Tuple[GaussianRational, ...]

    def __post_init__(self):
        a = tuple(GaussianRational.coerce(x) for x in self.diag)
        b = tuple(GaussianRational.coerce(x) for x in self.offdiag)
        if not a:
            raise InvalidInputError("Jacobi period must be at least 1")
        if len(a) != len(b):
            raise InvalidInputError(f"diag has {len(a)} entries but offdiag has {len(b)}")
        for i, bi in enumerate(b, start=1):
            if bi.is_zero:
                raise InvalidInputError(f"Off-diagonal entry b_{i} is zero")
        object.__setattr__(self, "diag", a)
        object.__setattr__(self, "offdiag", b)

    @classmethod
    def from_lists(cls, a: Sequence[Any], b: Sequence[Any]) -> "PeriodicJacobi":
        return cls(tuple(a), tuple(b))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PeriodicJacobi":
        if not isinstance(data, dict) or "a" not in data or "b" not in data:
            raise InvalidInputError('Jacobi JSON must look like {"r": r, "a": [...], "b": [...]}')
        jac = cls.from_lists(data["a"], data["b"])
        if "r" in data and int(data["r"]) != jac.r:
            raise InvalidInputError(f"r = {data['r']} but {jac.r} entries were given")
        return jac

    def to_json(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "a": [str(x) for x in self.diag],
            "b": [str(x) for x in self.offdiag],
        }

    @property
    def r(self) -> int:
        return len(self.diag)

    @property
    def is_real(self) -> bool:
        return all(x.is_real for x in self.diag + self.offdiag)

    @property
    def modulus(self) -> GaussianRational:
        """B = b_1 * ... * b_r"""
        out = GaussianRational(1)
        for b in self.offdiag:
            out = out * b
        return out

    def shifted(self, s: Any) -> "PeriodicJacobi":
        s = GaussianRational.coerce(s)
        return PeriodicJacobi(tuple(a + s for a in self.diag), self.offdiag)


@dataclass(frozen=True)
class BandSpectrum:
    """Spectrum of a real periodic Jacobi matrix."""

    bands: BandSet
    band_zeros: Tuple[float, ...]
    band_edges: Tuple[float, ...]
    edge_values: Tuple[float, ...] = field(default=())

    def to_json(self) -> Dict[str, List[float]]:
        return {
            "bands": self.bands.to_json(),
            "band_zeros": list(self.band_zeros),
            "band_edges": list(self.band_edges),
            "touching": list(self.bands.touching),
        }
