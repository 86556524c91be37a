"""
Discrete probability measures
"""
import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from potentia.exceptions import InvalidInputError

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point masses; weights are nonnegative and sum to 1."""

    locations: Tuple[complex, ...]
    weights: Tuple[float, ...]

    def __post_init__(self):
        locs = tuple(complex(z) for z in self.locations)
        ws = tuple(float(w) for w in self.weights)
        if not locs:
            raise InvalidInputError("A measure needs at least one atom")
        if len(locs) != len(ws):
            raise InvalidInputError("locations and weights differ in length")
        if any(w < 0 or not math.isfinite(w) for w in ws):
            raise InvalidInputError("Measure weights must be finite and nonnegative")
        total = math.fsum(ws)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidInputError(f"Measure weights sum to {total!r}, not 1")
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, points: Iterable[complex]) -> "DiscreteMeasure":
        pts = tuple(complex(z) for z in points)
        if not pts:
            raise InvalidInputError("A measure needs at least one atom")
        return cls(pts, (1.0 / len(pts),) * len(pts))

    @classmethod
    def dirac(cls, z: complex) -> "DiscreteMeasure":
        return cls((complex(z),), (1.0,))

    @classmethod
    def from_weighted(cls, atoms: Iterable[Tuple[complex, float]]) -> "DiscreteMeasure":
        items = list(atoms)
        return cls(tuple(z for z, _ in items), tuple(w for _, w in items))

    @property
    def atoms(self) -> List[Tuple[complex, float]]:
        return list(zip(self.locations, self.weights))

    def __len__(self) -> int:
        return len(self.locations)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.locations, dtype=complex), np.array(self.weights, dtype=float)

    def moment(self, k: int) -> complex:
        z, w = self.arrays()
        return complex(np.sum(w * z ** k))

    def mass_in(self, lo: float, hi: float, tol: float = 1e-9) -> float:
        """Mass carried by atoms within tol of the real segment [lo, hi]."""
        total = 0.0
        for z, w in self.atoms:
            if abs(z.imag) <= tol and lo - tol <= z.real <= hi + tol:
                total += w
        return total

    # ---- CSV codec: rows "re,im,weight" ----

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["re", "im", "weight"])
        for z, w in self.atoms:
            writer.writerow([repr(z.real), repr(z.imag), repr(w)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DiscreteMeasure":
        rows = [row for row in csv.reader(io.StringIO(text)) if row]
        if rows and rows[0][0].strip().lower() == "re":
            rows = rows[1:]
        try:
            atoms = [(complex(float(a), float(b)), float(w)) for a, b, w in rows]
        except ValueError as e:
            raise InvalidInputError(f"Bad measure CSV: {e}")
        return cls.from_weighted(atoms)
