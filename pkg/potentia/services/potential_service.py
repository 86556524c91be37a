"""
Potential Theory Service

Discrete logarithmic potentials and energies, Fekete points by grid
coordinate exchange, capacity estimation, counting measures and the
weak-convergence diagnostics used by the pipeline.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from potentia.config import settings
from potentia.exceptions import ComputationRefusedError, InvalidInputError
from potentia.models.compact import BandSet, PointCloud
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.measure import DiscreteMeasure
from potentia.models.polynomial import RationalPoly
from potentia.models.potential import CapacityEstimate, CapacityScheme, FeketeResult, MeasureDistance
from potentia.services.calibration_service import calibration_service
from potentia.services.core_service import core_service
from potentia.services.jacobi_service import jacobi_service
from potentia.services.root_service import root_service
from potentia.utils.parallel import ordered_map
from potentia.utils.quadrature import segment_nodes

logger = logging.getLogger(__name__)

CompactSet = Union[BandSet, PointCloud]

# relative slack allowed when checking that d_n decreases
MONOTONE_TOL = 1e-9


def _log_distance_matrix(grid: np.ndarray) -> np.ndarray:
    diff = np.abs(grid[:, None] - grid[None, :])
    with np.errstate(divide="ignore"):
        L = np.log(diff)
    np.fill_diagonal(L, -np.inf)
    return L


class PotentialService:

    # ---- potentials and energies ----

    def log_potential(self, mu: DiscreteMeasure, z: complex) -> float:
        """sum w_i ln(1/|z - x_i|); +inf when z sits on a charged atom."""
        x, w = mu.arrays()
        d = np.abs(complex(z) - x)
        if np.any((d == 0) & (w > 0)):
            return math.inf
        mask = w > 0
        return float(-np.sum(w[mask] * np.log(d[mask])))

    def energy(self, mu: DiscreteMeasure) -> float:
        """Off-diagonal discrete energy sum_{i != j} w_i w_j ln(1/|x_i - x_j|)."""
        if len(mu) < 2:
            raise InvalidInputError("energy needs at least two atoms")
        x, w = mu.arrays()
        d = np.abs(x[:, None] - x[None, :])
        np.fill_diagonal(d, 1.0)
        if np.any(d == 0):
            raise InvalidInputError("Coincident atoms have infinite interaction energy")
        ww = w[:, None] * w[None, :]
        np.fill_diagonal(ww, 0.0)
        return float(-np.sum(ww * np.log(d)))

    # ---- Fekete points ----

    def fekete_grid(self, K: CompactSet, grid_size: Optional[int] = None) -> np.ndarray:
        """Candidate points: the cloud itself, or a cosine-clustered grid per band."""
        if isinstance(K, PointCloud):
            return np.array(sorted(K.points, key=lambda z: (z.real, z.imag)), dtype=complex)
        grid_size = grid_size or settings.FEKETE_GRID
        per_band = max(grid_size // K.r, 3)
        if per_band % 2 == 0:
            per_band += 1
        return K.grid(per_band).astype(complex)

    def fekete_points(self, K: CompactSet, n: int, restarts: Optional[int] = None, seed: int = 0,
                      grid_size: Optional[int] = None) -> FeketeResult:
        """
        Local maximizer of q_n = prod_{i != j} |z_i - z_j| over the grid.

        Starts from a Leja sequence plus `restarts` seeded random subsets;
        every start is improved by single-point exchanges until a full sweep
        finds nothing better. The best start wins, ties going to the
        lexicographically smallest configuration.
        """
        if n < 2:
            raise InvalidInputError(f"Fekete points need n >= 2, got {n}")
        restarts = settings.FEKETE_RESTARTS if restarts is None else restarts
        grid = self.fekete_grid(K, grid_size)
        if n > len(grid):
            raise InvalidInputError(f"n = {n} exceeds the {len(grid)}-point discretization; use a finer grid")
        L = _log_distance_matrix(grid)

        starts = [self._leja_start(L, grid, n)]
        for k in range(restarts):
            rng = np.random.default_rng([seed, k])
            starts.append(np.sort(rng.choice(len(grid), size=n, replace=False)))
        results = ordered_map(lambda idx: self._exchange(L, idx), starts)

        best_idx, best_log, best_sweeps = None, -math.inf, 0
        for idx, logq, sweeps in results:
            key = tuple(sorted(idx))
            if logq > best_log + 1e-12 or (abs(logq - best_log) <= 1e-12 and best_idx is not None
                                            and key < tuple(sorted(best_idx))):
                best_idx, best_log, best_sweeps = idx, logq, sweeps
        pts = sorted((grid[i] for i in best_idx), key=lambda z: (z.real, z.imag))
        d_n = math.exp(best_log / (n * (n - 1)))
        q_n = math.exp(best_log) if best_log < 700 else math.inf
        logger.debug("Fekete n=%s: d_n=%.12g after %s sweep(s)", n, d_n, best_sweeps)
        return FeketeResult(
            points=[(float(z.real), float(z.imag)) for z in pts],
            pairwise_product=q_n,
            log_pairwise_product=best_log,
            d_n=d_n,
            grid_size=len(grid),
            sweeps=best_sweeps,
        )

    @staticmethod
    def _leja_start(L: np.ndarray, grid: np.ndarray, n: int) -> np.ndarray:
        first = int(np.argmax(np.abs(grid)))
        chosen = [first]
        total = L[:, first].copy()
        for _ in range(n - 1):
            nxt = int(np.argmax(total))
            chosen.append(nxt)
            total += L[:, nxt]
        return np.array(sorted(chosen))

    @staticmethod
    def _exchange(L: np.ndarray, start: np.ndarray) -> Tuple[List[int], float, int]:
        idx = [int(i) for i in start]
        n = len(idx)
        total = L[:, idx].sum(axis=1)
        sweeps = 0
        improved = True
        while improved:
            improved = False
            sweeps += 1
            for pos in range(n):
                cur = idx[pos]
                current = float(np.sum(L[cur, [j for k, j in enumerate(idx) if k != pos]]))
                with np.errstate(invalid="ignore"):
                    score = total - L[:, cur]
                score[cur] = current
                score[np.isnan(score)] = -np.inf
                cand = int(np.argmax(score))
                if score[cand] > current + 1e-12 * (1.0 + abs(current)):
                    idx[pos] = cand
                    total = L[:, idx].sum(axis=1)
                    improved = True
        sub = L[np.ix_(idx, idx)]
        logq = float(np.sum(sub[~np.eye(n, dtype=bool)]))
        return idx, logq, sweeps

    def transfinite_diameter(self, K: CompactSet, n: int, seed: int = 0) -> float:
        return self.fekete_points(K, n, seed=seed).d_n

    # ---- capacity ----

    def capacity_estimate(self, K: Union[CompactSet, PeriodicJacobi], scheme: CapacityScheme = CapacityScheme.FEKETE_EXTRAPOLATION,
                          n_max: int = 64, seed: int = 0) -> CapacityEstimate:
        scheme = CapacityScheme(scheme)
        if scheme == CapacityScheme.JACOBI_FORMULA:
            if isinstance(K, PeriodicJacobi):
                J = K
            elif isinstance(K, BandSet):
                J = jacobi_service.jacobi_for_bands(K)
            else:
                raise InvalidInputError("jacobi_formula needs a band set or a Jacobi matrix")
            return CapacityEstimate(value=jacobi_service.jacobi_capacity(J), scheme=scheme, n_used=J.r, error_bound=0.0)
        if scheme == CapacityScheme.ROBIN_CONSTANT:
            if not isinstance(K, BandSet):
                raise InvalidInputError("robin_constant needs a band set")
            robin = calibration_service.robin_constant(K)
            return CapacityEstimate(value=math.exp(-robin), scheme=scheme, n_used=settings.QUAD_NODES)
        if isinstance(K, PeriodicJacobi):
            K = jacobi_service.spectrum_bands(K).bands
        return self._fekete_extrapolation(K, n_max, seed)

    def fekete_sequence(self, K: CompactSet, n_max: int) -> List[int]:
        ns = [n_max]
        while ns[-1] // 2 >= 4 and len(ns) < 4:
            ns.append(ns[-1] // 2)
        return sorted(ns)

    def _fekete_extrapolation(self, K: CompactSet, n_max: int, seed: int) -> CapacityEstimate:
        """
        Fit ln d_n = ln C + alpha ln(n)/(n-1) + beta/(n-1) over a doubling
        sequence of n; the model is exact for the circle.
        """
        ns = self.fekete_sequence(K, n_max)
        ds = [self.fekete_points(K, n, seed=seed).d_n for n in ns]
        for (n0, d0), (n1, d1) in zip(zip(ns, ds), zip(ns[1:], ds[1:])):
            if d1 > d0 * (1.0 + MONOTONE_TOL):
                raise ComputationRefusedError(
                    f"d_n increased from n={n0} to n={n1}; the discretization is too coarse, use a finer grid",
                    diameters=ds, ns=ns,
                )
        d_last = ds[-1]
        if len(ns) >= 3:
            nn = np.array(ns, dtype=float)
            A = np.column_stack([np.ones_like(nn), np.log(nn) / (nn - 1.0), 1.0 / (nn - 1.0)])
            coef, *_ = np.linalg.lstsq(A, np.log(ds), rcond=None)
            fit = float(math.exp(coef[0]))
        else:
            fit = d_last
        value = min(fit, d_last)
        logger.info("Capacity by Fekete extrapolation: n=%s, d_n=%s, value=%.10g", ns, ds, value)
        return CapacityEstimate(
            value=value,
            scheme=CapacityScheme.FEKETE_EXTRAPOLATION,
            n_used=ns[-1],
            error_bound=d_last - value,
            diameters=ds,
        )

    # ---- counting measures ----

    def counting_measure(self, p: Union[RationalPoly, Sequence[complex], np.ndarray]) -> DiscreteMeasure:
        """Uniform mass on the zeros of p, multiplicities merged."""
        if isinstance(p, RationalPoly):
            if p.degree < 1:
                raise InvalidInputError("counting_measure needs degree >= 1")
            deg = p.degree
            atoms = {}
            for factor, mult in core_service.squarefree_decomposition(p):
                for z in root_service.roots(factor):
                    z = complex(z)
                    atoms[z] = atoms.get(z, 0) + mult
        else:
            zs = root_service.roots(p)
            deg = len(zs)
            atoms = {}
            for z in zs:
                atoms[complex(z)] = atoms.get(complex(z), 0) + 1
        locs = sorted(atoms, key=lambda z: (z.real, z.imag))
        return DiscreteMeasure(tuple(locs), tuple(atoms[z] / deg for z in locs))

    def exterior_ring(self, *measures: DiscreteMeasure, count: Optional[int] = None) -> np.ndarray:
        """Ring of points at distance 1 outside the hull of all supports."""
        count = count or settings.EXTERIOR_RING_POINTS
        pts = np.concatenate([m.arrays()[0] for m in measures])
        lo_re, hi_re = pts.real.min(), pts.real.max()
        lo_im, hi_im = pts.imag.min(), pts.imag.max()
        center = complex((lo_re + hi_re) / 2.0, (lo_im + hi_im) / 2.0)
        radius = float(np.max(np.abs(pts - center))) + 1.0
        theta = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        return center + radius * np.exp(1j * theta)

    def measure_distance(self, mu: DiscreteMeasure, nu: DiscreteMeasure, M: int = 4) -> MeasureDistance:
        """Max moment gap over k = 1..M plus the max potential gap on the exterior ring."""
        if M < 1:
            raise InvalidInputError("M must be at least 1")
        moment = max(abs(mu.moment(k) - nu.moment(k)) for k in range(1, M + 1))
        ring = self.exterior_ring(mu, nu)
        gap = max(abs(self.log_potential(mu, z) - self.log_potential(nu, z)) for z in ring)
        return MeasureDistance(moment_distance=float(moment), potential_gap=float(gap), moments=M)

    # ---- equilibrium measure ----

    def equilibrium_measure(self, E: BandSet, nodes: Optional[int] = None) -> DiscreteMeasure:
        """
        Gauss-Chebyshev discretization of the density |R(t)| / (pi sqrt|q(t)|)
        on each band; `nodes` is the total atom count.
        """
        nodes = nodes or settings.REFERENCE_NODES
        data = calibration_service.harmonic_measures(E)
        R = np.polynomial.Polynomial(data.R_coeffs)
        ends = np.array(E.endpoints)
        per_band = max(nodes // E.r, 1)
        locs, weights = [], []
        for j, (lo, hi) in enumerate(E.bands):
            t, w = segment_nodes(lo, hi, per_band)
            others = np.delete(ends, [2 * j, 2 * j + 1])
            rest = np.prod(np.abs(t[:, None] - others[None, :]), axis=1) if len(others) else np.ones_like(t)
            locs.append(t)
            weights.append(w * np.abs(R(t)) / (np.pi * np.sqrt(rest)))
        locs = np.concatenate(locs)
        weights = np.concatenate(weights)
        weights = weights / math.fsum(weights)
        return DiscreteMeasure(tuple(complex(x) for x in locs), tuple(float(w) for w in weights))

    def bernstein_walsh_gap(self, E: BandSet, p: RationalPoly, z: complex, grid: int = 512) -> float:
        """ln(||p||_E^(1/n) / C(E)) + g_E(z) - (1/n) ln|p(z)|, which is >= 0."""
        if p.degree < 1:
            raise InvalidInputError("Bernstein-Walsh needs degree >= 1")
        pn = p.to_numpy()
        sup = float(np.max(np.abs(pn(E.grid(grid)))))
        robin = calibration_service.robin_constant(E)
        g = calibration_service.green_eval(E, z).g
        n = p.degree
        return math.log(sup) / n + robin + g - math.log(abs(pn(complex(z)))) / n


potential_service = PotentialService()
