"""
Diophantine Service

Exhaustive and Monte-Carlo scans over integer polynomials: small sup norm on a
compact set, the volume of the unit-norm coefficient body, algebraic integers
with all conjugates in a set, nearest conjugate sets, and Bernstein polynomials.
"""
import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from potentia.config import settings
from potentia.exceptions import BudgetExceededError, InvalidInputError
from potentia.models.compact import BandSet, Disk, PointCloud
from potentia.models.diophantine import CoeffBox, NearestConjugateResult, SmallNormPolynomial
from potentia.models.polynomial import RationalPoly
from potentia.services.chebyshev_service import band_extrema
from potentia.services.core_service import core_service
from potentia.services.potential_service import potential_service
from potentia.services.root_service import root_service
from potentia.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

SmallSet = Union[BandSet, PointCloud, Disk]

CHUNK = 1 << 14
MC_CHUNK = 1 << 15
ROOT_INFLATION = 1e-9
# float roots of a k-fold factor scatter like eps^(1/k); exact check follows
PREFILTER_TOL = 0.05
MAX_TOTALLY_IN_DEGREE = 8
MIN_MC_SAMPLES = 10_000


def _check_budget(count: int, what: str) -> None:
    if count > settings.ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"{what} needs {count} candidates, over the enumeration budget {settings.ENUMERATION_BUDGET}",
            candidates=count,
        )


def _box_chunk(bounds: Sequence[int], start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the box in lexicographic order, as integer coefficient vectors."""
    shape = tuple(2 * b + 1 for b in bounds)
    digits = np.unravel_index(np.arange(start, stop), shape)
    return np.stack([d - b for d, b in zip(digits, bounds)], axis=1).astype(np.int64)


def _sample_grid(K: SmallSet, n: int) -> np.ndarray:
    if isinstance(K, BandSet):
        return K.grid(max(33, 32 * n + 1))
    if isinstance(K, Disk):
        return K.boundary(max(64, 64 * n)).array()
    return K.array()


def _grid_sup(coeffs: np.ndarray, grid: np.ndarray) -> np.ndarray:
    V = np.vander(grid, coeffs.shape[1], increasing=True)
    return np.max(np.abs(coeffs @ V.T), axis=1)


def _refined_sup(K: SmallSet, coeffs: Sequence[float], grid: np.ndarray) -> float:
    c = np.asarray(coeffs, dtype=float)
    if not isinstance(K, BandSet):
        return float(np.max(np.abs(np.polynomial.polynomial.polyval(grid, c))))
    per_band = len(grid) // K.r

    def f(x):
        return float(np.polynomial.polynomial.polyval(x, c))

    best = 0.0
    for j in range(K.r):
        for _, v in band_extrema(f, grid[j * per_band:(j + 1) * per_band]):
            best = max(best, abs(v))
    return best


def _is_representative(row: np.ndarray) -> bool:
    nz = np.nonzero(row)[0]
    return len(nz) > 0 and row[nz[0]] > 0


def _bottleneck(roots: np.ndarray, targets: np.ndarray) -> float:
    """Smallest t admitting a perfect matching with every matched pair within t."""
    dist = np.abs(roots[:, None] - targets[None, :])
    levels = np.unique(dist)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        graph = csr_matrix((dist <= levels[mid]).astype(np.int8))
        if np.all(maximum_bipartite_matching(graph, perm_type="column") >= 0):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


class DiophantineService:

    # ---- coefficient boxes ----

    def lagrange_bounds(self, K: SmallSet, n: int) -> np.ndarray:
        """
        |a_k| <= sum_i |[z^k] L_i| for |f| < 1 on K, with L_i the Lagrange
        basis at n+1 Fekete points of K.
        """
        if n < 1:
            raise InvalidInputError("Degree must be at least 1")
        domain = K.boundary(max(64, 8 * n)) if isinstance(K, Disk) else K
        pts = np.array(potential_service.fekete_points(domain, n + 1).complex_points())
        bounds = np.zeros(n + 1)
        for i, zi in enumerate(pts):
            others = np.delete(pts, i)
            basis = np.polynomial.polynomial.polyfromroots(others) / np.prod(zi - others)
            bounds += np.abs(basis)
        return bounds

    def lagrange_box(self, K: SmallSet, n: int) -> CoeffBox:
        bounds = self.lagrange_bounds(K, n)
        return CoeffBox(n=n, bounds=[int(math.floor(b + 1e-9)) for b in bounds])

    def minkowski_guarantee(self, volume: float, n: int) -> bool:
        """A symmetric convex body in R^(n+1) of volume > 2^(n+1) holds a nonzero lattice point."""
        return volume > 2.0 ** (n + 1)

    # ---- small sup norm ----

    def small_norm_search(self, K: SmallSet, n: int, box: CoeffBox) -> List[SmallNormPolynomial]:
        """
        All nonzero integer vectors in the box with sup_K |f_a| < 1, both signs,
        sorted by sup norm. One representative per sign pair is evaluated.
        """
        if box.n != n:
            raise InvalidInputError(f"Box is for degree {box.n}, search is for degree {n}")
        _check_budget(box.size, "small_norm_search")
        grid = _sample_grid(K, n)
        starts = list(range(0, box.size, CHUNK))

        def scan(start: int) -> List[Tuple[float, Tuple[int, ...]]]:
            rows = _box_chunk(box.bounds, start, min(start + CHUNK, box.size))
            sup = _grid_sup(rows.astype(float), grid)
            hits = []
            for row, s in zip(rows, sup):
                if s >= 1.0 or not _is_representative(row):
                    continue
                exact = _refined_sup(K, row, grid)
                if exact < 1.0:
                    hits.append((exact, tuple(int(x) for x in row)))
            return hits

        found: List[Tuple[float, Tuple[int, ...]]] = []
        for hits in ordered_map(scan, starts):
            for s, row in hits:
                found.append((s, row))
                found.append((s, tuple(-x for x in row)))
        found.sort()
        logger.info("small_norm_search: %s polynomial(s) of degree <= %s below norm 1", len(found), n)
        return [SmallNormPolynomial(coeffs=list(row), sup_norm=s) for s, row in found]

    # ---- Monte Carlo volume ----

    def count_hits(self, K: SmallSet, n: int, samples: np.ndarray) -> int:
        """Rows a of `samples` with sup over the grid of |f_a| < 1."""
        grid = _sample_grid(K, n)
        return int(np.count_nonzero(_grid_sup(samples, grid) < 1.0))

    def fn_volume_mc(self, K: SmallSet, n: int, samples: int, seed: int = 0) -> Tuple[float, Optional[float]]:
        """
        Monte-Carlo volume of {a : sup_K |f_a| < 1} inside the Lagrange box,
        and (2/n^2) ln(volume). Chunk k draws from default_rng([seed, k]).
        """
        if samples < MIN_MC_SAMPLES:
            raise InvalidInputError(f"Need at least {MIN_MC_SAMPLES} samples, got {samples}")
        half = self.lagrange_bounds(K, n) * (1.0 + 1e-9)
        box_volume = float(np.prod(2.0 * half))
        chunks = [(k, min(MC_CHUNK, samples - k * MC_CHUNK)) for k in range(math.ceil(samples / MC_CHUNK))]

        def run(chunk: Tuple[int, int]) -> int:
            k, size = chunk
            rng = np.random.default_rng([seed, k])
            draws = rng.uniform(-1.0, 1.0, size=(size, n + 1)) * half
            return self.count_hits(K, n, draws)

        hits = sum(ordered_map(run, chunks))
        if hits == 0:
            logger.warning("fn_volume_mc: no hits in %s samples; volume reported as 0", samples)
            return 0.0, None
        volume = box_volume * hits / samples
        return volume, 2.0 * math.log(volume) / n ** 2

    # ---- totally-in enumeration ----

    def totally_in_enumerate(self, K: Union[Disk, BandSet], n: int) -> List[RationalPoly]:
        """Monic integer polynomials of degree n with every root in K (inflated by 1e-9)."""
        if n < 1:
            raise InvalidInputError("Degree must be at least 1")
        if n > MAX_TOTALLY_IN_DEGREE:
            raise BudgetExceededError(f"totally_in_enumerate is capped at degree {MAX_TOTALLY_IN_DEGREE}")
        rho = K.max_modulus if isinstance(K, Disk) else max(abs(e) for e in K.endpoints)
        box = CoeffBox.from_radius(n, rho)
        inner = box.bounds[:-1]
        total = box.monic_size
        _check_budget(total, "totally_in_enumerate")

        def scan(start: int) -> List[Tuple[int, ...]]:
            rows = _box_chunk(inner, start, min(start + CHUNK, total))
            keep = []
            for row in rows:
                coeffs = np.append(row.astype(float), 1.0)
                zs = np.polynomial.polynomial.polyroots(coeffs)
                if all(self._near(K, z, PREFILTER_TOL) for z in zs):
                    keep.append(tuple(int(x) for x in row) + (1,))
            return keep

        found = []
        for rows in ordered_map(scan, list(range(0, total, CHUNK))):
            for row in rows:
                p = RationalPoly(row)
                if self._all_roots_in(K, p):
                    found.append(p)
        logger.info("totally_in_enumerate: %s monic polynomial(s) of degree %s", len(found), n)
        return found

    @staticmethod
    def _near(K: Union[Disk, BandSet], z: complex, tol: float) -> bool:
        if isinstance(K, Disk):
            return abs(z - K.center) <= K.radius + tol
        return abs(z.imag) <= tol and K.band_index(z.real, tol) >= 0

    def _all_roots_in(self, K: Union[Disk, BandSet], p: RationalPoly) -> bool:
        for factor, _ in core_service.squarefree_decomposition(p):
            for z in root_service.roots(factor):
                if not self._near(K, complex(z), ROOT_INFLATION):
                    return False
        return True

    # ---- Kronecker ----

    def cyclotomic(self, m: int) -> RationalPoly:
        """Phi_m = (z^m - 1) / prod_{d | m, d < m} Phi_d."""
        if m < 1:
            raise InvalidInputError("Cyclotomic index must be positive")
        p = RationalPoly.monomial(m) - 1
        for d in range(1, m):
            if m % d == 0:
                p = p.divmod(self.cyclotomic(d))[0]
        return p

    def kronecker_factorization(self, p: RationalPoly) -> Tuple[List[Tuple[str, int]], RationalPoly]:
        """
        Strip powers of z and cyclotomic factors by exact division. The
        remainder is 1 exactly when p is a product of z and cyclotomics.
        """
        factors: List[Tuple[str, int]] = []
        rest = p
        k = 0
        while rest.degree > 0 and rest.coefficient(0).is_zero:
            rest = rest.divmod(RationalPoly.identity())[0]
            k += 1
        if k:
            factors.append(("z", k))
        m = 1
        # phi(m) >= sqrt(m/2), so larger indices cannot divide
        while rest.degree > 0 and m <= 2 * rest.degree ** 2 + 2:
            phi = self.cyclotomic(m)
            mult = 0
            while phi.degree <= rest.degree:
                q, r = rest.divmod(phi)
                if not r.is_zero:
                    break
                rest, mult = q, mult + 1
            if mult:
                factors.append((f"Phi_{m}", mult))
            m += 1
        return factors, rest

    def is_kronecker_product(self, p: RationalPoly) -> bool:
        _, rest = self.kronecker_factorization(p)
        return rest.degree == 0 and abs(rest.coefficient(0)) == 1.0

    # ---- Bernstein ----

    def bernstein(self, f_values: Sequence, n: int) -> RationalPoly:
        """sum_v f(v/n) C(n,v) x^v (1-x)^(n-v); exact for exact samples."""
        if n < 1:
            raise InvalidInputError("Bernstein degree must be at least 1")
        if len(f_values) != n + 1:
            raise InvalidInputError(f"Need {n + 1} samples f(v/n), got {len(f_values)}")
        x = RationalPoly.identity()
        one_minus = RationalPoly([1, -1])
        total = RationalPoly()
        for v, fv in enumerate(f_values):
            value = fv if isinstance(fv, (int, Fraction)) else Fraction(fv)
            if value == 0:
                continue
            total = total + (x ** v) * (one_minus ** (n - v)) * (value * math.comb(n, v))
        return total

    def ferguson_approximable(self, f0, f1) -> bool:
        """Continuous f on [0, 1] is a uniform limit of integer polynomials iff f(0), f(1) are integers."""
        return Fraction(f0).denominator == 1 and Fraction(f1).denominator == 1

    # ---- nearest conjugate sets ----

    def nearest_conjugate_set(self, targets: Iterable[complex], box: CoeffBox) -> NearestConjugateResult:
        """
        Monic integer polynomial in the box whose roots best match the targets
        under the bottleneck (max-distance) matching. Ties keep the first
        candidate in lexicographic order.
        """
        cloud = PointCloud(tuple(targets), conj_symmetric=True)
        tz = cloud.array()
        n = len(tz)
        if box.n != n:
            raise InvalidInputError(f"Box degree {box.n} differs from the number of targets {n}")
        inner = box.bounds[:-1]
        total = box.monic_size
        _check_budget(total, "nearest_conjugate_set")

        def scan(start: int) -> Tuple[float, Optional[Tuple[int, ...]]]:
            rows = _box_chunk(inner, start, min(start + CHUNK, total))
            best, arg = math.inf, None
            for row in rows:
                zs = np.polynomial.polynomial.polyroots(np.append(row.astype(float), 1.0))
                d = _bottleneck(np.atleast_1d(zs).astype(complex), tz)
                if d < best:
                    best, arg = d, tuple(int(x) for x in row) + (1,)
            return best, arg

        best, arg = math.inf, None
        for d, row in ordered_map(scan, list(range(0, total, CHUNK))):
            if row is not None and d < best:
                best, arg = d, row
        roots = np.atleast_1d(np.polynomial.polynomial.polyroots(np.array(arg, dtype=float))).astype(complex)
        roots = sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
        return NearestConjugateResult(
            coeffs=list(arg),
            distance=best,
            roots=[(float(z.real), float(z.imag)) for z in roots],
            note=f"degree {n} only; higher-degree approximants may place extra conjugates far from the targets",
        )


diophantine_service = DiophantineService()
