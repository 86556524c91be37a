"""
Compact-set representations: band sets, point clouds, disks
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from potentia.exceptions import InvalidInputError


@dataclass(frozen=True)
class BandSet:
    """
    Finite union of closed real intervals [e_1, e_2] ∪ ... ∪ [e_{2r-1}, e_{2r}].

    `multiplicity[j]` counts how many touching bands were merged into band j
    (1 for an ordinary band); `touching` lists the merge points.
    """

    endpoints: Tuple[float, ...]
    multiplicity: Tuple[int, ...] = ()
    touching: Tuple[float, ...] = ()

    def __post_init__(self):
        ends = tuple(float(e) for e in self.endpoints)
        if len(ends) < 2 or len(ends) % 2:
            raise InvalidInputError(f"A band set needs an even, nonzero number of endpoints, got {len(ends)}")
        if not all(math.isfinite(e) for e in ends):
            raise InvalidInputError("Band endpoints must be finite")
        if any(b <= a for a, b in zip(ends, ends[1:])):
            raise InvalidInputError(f"Band endpoints must be strictly increasing: {list(ends)}")
        object.__setattr__(self, "endpoints", ends)
        mult = tuple(self.multiplicity) or (1,) * (len(ends) // 2)
        if len(mult) != len(ends) // 2:
            raise InvalidInputError("multiplicity must have one entry per band")
        object.__setattr__(self, "multiplicity", mult)
        object.__setattr__(self, "touching", tuple(float(t) for t in self.touching))

    @classmethod
    def interval(cls, a: float, b: float) -> "BandSet":
        return cls((a, b))

    @classmethod
    def from_bands(cls, bands: Iterable[Sequence[float]]) -> "BandSet":
        ends: List[float] = []
        for lo, hi in bands:
            ends.extend([lo, hi])
        return cls(tuple(ends))

    @classmethod
    def from_json(cls, data) -> "BandSet":
        if not isinstance(data, (list, tuple)):
            raise InvalidInputError("BandSet JSON must be an array of endpoints")
        try:
            return cls(tuple(float(x) for x in data))
        except (TypeError, ValueError) as e:
            raise InvalidInputError(f"Bad BandSet JSON: {e}")

    def to_json(self) -> List[float]:
        return list(self.endpoints)

    @property
    def r(self) -> int:
        return len(self.endpoints) // 2

    @property
    def bands(self) -> List[Tuple[float, float]]:
        e = self.endpoints
        return [(e[2 * j], e[2 * j + 1]) for j in range(self.r)]

    @property
    def gaps(self) -> List[Tuple[float, float]]:
        e = self.endpoints
        return [(e[2 * j + 1], e[2 * j + 2]) for j in range(self.r - 1)]

    @property
    def hull(self) -> Tuple[float, float]:
        return self.endpoints[0], self.endpoints[-1]

    @property
    def has_closed_gaps(self) -> bool:
        return any(m > 1 for m in self.multiplicity)

    def band_index(self, x: float, tol: float = 0.0) -> int:
        """Index of the band containing real x, or -1."""
        for j, (lo, hi) in enumerate(self.bands):
            if lo - tol <= x <= hi + tol:
                return j
        return -1

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return self.distance_to(z) <= tol

    def distance_to(self, z: complex) -> float:
        z = complex(z)
        best = math.inf
        for lo, hi in self.bands:
            x = min(max(z.real, lo), hi)
            best = min(best, abs(z - x))
        return best

    def scaled(self, alpha: float) -> "BandSet":
        ends = sorted(alpha * e for e in self.endpoints)
        return BandSet(tuple(ends))

    def translated(self, shift: float) -> "BandSet":
        return BandSet(tuple(e + shift for e in self.endpoints), self.multiplicity,
                       tuple(t + shift for t in self.touching))

    def grid(self, per_band: int) -> np.ndarray:
        """Chebyshev-clustered grid on every band, endpoints included, exactly symmetric per band."""
        pts = []
        k = np.arange(per_band)
        base = -np.cos(np.pi * k / (per_band - 1))
        base = (base - base[::-1]) / 2.0
        for lo, hi in self.bands:
            c, h = (lo + hi) / 2.0, (hi - lo) / 2.0
            pts.append(c + h * base)
        return np.concatenate(pts)

    def uniform_grid(self, per_band: int) -> np.ndarray:
        return np.concatenate([np.linspace(lo, hi, per_band) for lo, hi in self.bands])


@dataclass(frozen=True)
class PointCloud:
    """Finite point set; when `conj_symmetric` the points come in exact conjugate pairs."""

    points: Tuple[complex, ...]
    conj_symmetric: bool = False

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise InvalidInputError("A point cloud needs at least one point")
        object.__setattr__(self, "points", pts)
        if self.conj_symmetric:
            remaining = sorted(pts, key=lambda z: (z.real, z.imag))
            mirrored = sorted((p.conjugate() for p in pts), key=lambda z: (z.real, z.imag))
            if remaining != mirrored:
                raise InvalidInputError("Point cloud is not closed under exact conjugation")

    @classmethod
    def symmetric(cls, upper: Iterable[complex]) -> "PointCloud":
        """Build a conjugation-closed cloud from its points with Im >= 0."""
        pts: List[complex] = []
        for z in upper:
            z = complex(z)
            if z.imag < 0:
                raise InvalidInputError("symmetric() expects points in the closed upper half-plane")
            pts.append(z)
            if z.imag > 0:
                pts.append(z.conjugate())
        return cls(tuple(pts), conj_symmetric=True)

    @classmethod
    def circle(cls, n: int, radius: float = 1.0, center: float = 0.0) -> "PointCloud":
        """n equispaced points on a circle centred on the real axis, paired exactly."""
        upper = []
        for k in range(n // 2 + 1):
            theta = 2.0 * math.pi * k / n
            z = complex(center + radius * math.cos(theta), radius * math.sin(theta))
            if k == 0 or 2 * k == n:
                z = complex(z.real, 0.0)
            upper.append(z)
        return cls.symmetric(upper)

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def scaled(self, alpha: float) -> "PointCloud":
        return PointCloud(tuple(alpha * p for p in self.points), self.conj_symmetric)

    def translated(self, shift: float) -> "PointCloud":
        return PointCloud(tuple(p + shift for p in self.points), self.conj_symmetric)

    def distance_to(self, z: complex) -> float:
        return float(np.min(np.abs(self.array() - complex(z))))


@dataclass(frozen=True)
class Disk:
    """Closed disk |z - center| <= radius."""

    radius: float
    center: complex = 0j

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidInputError("Disk radius must be positive")

    @property
    def max_modulus(self) -> float:
        return abs(complex(self.center)) + self.radius

    def distance_to(self, z: complex) -> float:
        return max(abs(complex(z) - complex(self.center)) - self.radius, 0.0)

    def boundary(self, n: int) -> PointCloud:
        c = complex(self.center)
        if c.imag != 0:
            return PointCloud(tuple(c + self.radius * np.exp(2j * np.pi * k / n) for k in range(n)))
        return PointCloud.circle(n, self.radius, c.real)
