"""
Calibration Service

Green differential R(t) dt / sqrt(q(t)) of a band set: the gap-period
system for R, harmonic measures, Green function, Robin constant, calibrated
inflation and the cosh construction of Chebyshev polynomials.

Branch: sqrt(q(t)) is the product of principal square roots sqrt(t - e_i).
It is analytic off the bands and positive for t > e_2r.
"""
import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from potentia.config import settings
from potentia.exceptions import (
    ComputationRefusedError,
    ConsistencyError,
    ConvergenceError,
    InvalidInputError,
    PreconditionError,
)
from potentia.models.calibration import CalibrationData, GreenEvaluation
from potentia.models.compact import BandSet
from potentia.utils.quadrature import (
    composite_legendre,
    graded_legendre,
    legendre_rule,
    segment_nodes,
)

logger = logging.getLogger(__name__)

OMEGA_SUM_TOL = 1e-10
CALIBRATION_TOL = 1e-8
GREEN_NEGATIVE_TOL = 1e-8


class _Differential:
    """R and q of one band set, with the quadratures built on them."""

    def __init__(self, endpoints: Tuple[float, ...], nodes: int):
        self.e = np.array(endpoints, dtype=float)
        self.r = len(endpoints) // 2
        self.nodes = nodes
        self.q = Polynomial.fromroots(self.e)
        self.R = self._solve_R()

    # sqrt|q| on a segment splits into the Chebyshev weight and the rest
    def _segment(self, lo_index: int, n: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        lo, hi = self.e[lo_index], self.e[lo_index + 1]
        t, w = segment_nodes(lo, hi, n or self.nodes)
        others = np.delete(self.e, [lo_index, lo_index + 1])
        rest = np.prod(np.abs(t[:, None] - others[None, :]), axis=1) if len(others) else np.ones_like(t)
        return t, w, np.sqrt(rest)

    def gap_moments(self, n: Optional[int] = None) -> np.ndarray:
        """M[k, j] = integral over gap k of s^j / sqrt|q|, s the hull-normalized variable."""
        c, h = self.center_scale()
        M = np.zeros((self.r - 1, self.r))
        for k in range(self.r - 1):
            t, w, root = self._segment(2 * k + 1, n)
            s = (t - c) / h
            for j in range(self.r):
                M[k, j] = np.sum(w * s ** j / root)
        return M

    def center_scale(self) -> Tuple[float, float]:
        return (self.e[0] + self.e[-1]) / 2.0, (self.e[-1] - self.e[0]) / 2.0

    def _solve_R(self) -> Polynomial:
        if self.r == 1:
            return Polynomial([1.0])
        M = self.gap_moments()
        A, rhs = M[:, :-1], -M[:, -1]
        if not np.all(np.isfinite(A)) or np.linalg.cond(A) > 1e14:
            raise ComputationRefusedError("Gap moment matrix is numerically singular; gaps are degenerate",
                                          condition=float(np.linalg.cond(A)))
        coef_s = np.append(np.linalg.solve(A, rhs), 1.0)
        c, h = self.center_scale()
        # back to t: R(t) = h^(r-1) R_s((t - c) / h), monic in t
        R = Polynomial(coef_s)(Polynomial([-c / h, 1.0 / h])) * h ** (self.r - 1)
        return Polynomial(R.coef / R.coef[-1])

    def band_periods(self, n: Optional[int] = None) -> np.ndarray:
        out = np.zeros(self.r)
        for k in range(self.r):
            t, w, root = self._segment(2 * k, n)
            out[k] = np.sum(w * self.R(t) / root)
        return out

    def sqrt_q(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        return np.prod(np.sqrt(t[..., None] - self.e), axis=-1)

    def integrand(self, t: np.ndarray) -> np.ndarray:
        return self.R(t) / self.sqrt_q(t)

    # ---- path integrals of the differential ----

    def right_leg(self, delta: float) -> float:
        """integral_{e_2r}^{e_2r + delta} R / sqrt(q) via t = e_2r + s^2."""
        top = self.e[-1]
        last_band = self.e[-1] - self.e[-2]
        head = min(delta, last_band)
        x, w = legendre_rule(self.nodes)
        s = (x + 1.0) * math.sqrt(head) / 2.0
        t = top + s ** 2
        others = self.e[:-1]
        rest = np.prod(t[:, None] - others[None, :], axis=1)
        total = float(np.sum(w * math.sqrt(head) / 2.0 * 2.0 * self.R(t) / np.sqrt(rest)))
        if delta > head:
            panels = max(1, int(math.ceil((delta - head) / max(last_band, 1e-3))))
            panels = min(panels, 64)
            t2, w2 = composite_legendre(top + head, top + delta, self.nodes, panels)
            total += float(np.sum(w2 * self.integrand(t2)).real)
        return total

    def complex_integral(self, z: complex) -> complex:
        """G(z) = integral_{e_2r}^{z} R / sqrt(q) along a path avoiding the bands."""
        z = complex(z)
        top = self.e[-1]
        width = self.e[-1] - self.e[0]
        if z.imag == 0 and z.real >= top:
            return complex(self.right_leg(z.real - top), 0.0)
        step = max(1.0, 0.5 * width)
        x0 = top + step
        total = complex(self.right_leg(step), 0.0)
        sign = 1.0 if z.imag >= 0 else -1.0
        H = sign * max(abs(z.imag), step)
        legs = [(complex(x0, 0.0), complex(x0, H)), (complex(x0, H), complex(z.real, H)), (complex(z.real, H), z)]
        for k, (a, b) in enumerate(legs):
            length = abs(b - a)
            if length == 0:
                continue
            if k == 2:
                near = self._distance_to_bands(z)
                levels = int(min(40, max(2, math.ceil(math.log2(length / max(near, 1e-300))) + 2)))
                t, w = graded_legendre(a, b, self.nodes, levels=levels, grade_start=False, grade_end=True)
            else:
                panels = int(min(256, max(2, math.ceil(2.0 * length / abs(H)))))
                t, w = composite_legendre(a, b, self.nodes, panels)
            total += complex(np.sum(w * self.integrand(t)))
        return total

    def _distance_to_bands(self, z: complex) -> float:
        best = math.inf
        for k in range(self.r):
            lo, hi = self.e[2 * k], self.e[2 * k + 1]
            x = min(max(z.real, lo), hi)
            best = min(best, abs(z - x))
        return best

    def robin(self) -> float:
        """lim (g(x) - ln x), with the tail integral_{x1}^inf (R/sqrt(q) - 1/t) taken exactly via t = x1/s."""
        width = self.e[-1] - self.e[0]
        x1 = max(self.e[-1] + width + 1.0, 2.0 * float(np.max(np.abs(self.e))) + 1.0)
        head = self.right_leg(x1 - self.e[-1])
        x, w = legendre_rule(2 * self.nodes)
        s = (x + 1.0) / 2.0
        t = x1 / s
        f = (self.R(t) / np.prod(np.sqrt(t[:, None] - self.e[None, :]), axis=1) - 1.0 / t) * x1 / s ** 2
        tail = float(np.sum(w * f) / 2.0)
        return head - math.log(x1) + tail


@lru_cache(maxsize=128)
def _differential(endpoints: Tuple[float, ...], nodes: int) -> _Differential:
    return _Differential(endpoints, nodes)


class CalibrationService:

    def _prepare(self, E: BandSet, nodes: Optional[int] = None) -> _Differential:
        if E.has_closed_gaps:
            raise PreconditionError("Band set has closed gaps; calibration needs every gap open",
                                    touching=list(E.touching))
        return _differential(E.endpoints, nodes or settings.QUAD_NODES)

    def solve_R(self, E: BandSet, nodes: Optional[int] = None) -> CalibrationData:
        """Monic R of degree r-1 with vanishing gap periods; one root per gap."""
        d = self._prepare(E, nodes)
        lambdas: List[float] = []
        if E.r > 1:
            roots = np.sort(d.R.roots())
            if np.any(np.abs(roots.imag) > 1e-9):
                raise ConsistencyError("R has non-real roots", roots=[[z.real, z.imag] for z in roots])
            roots = roots.real
            for k, (lo, hi) in enumerate(E.gaps):
                inside = [x for x in roots if lo < x < hi]
                if len(inside) != 1:
                    raise ConsistencyError(f"Gap {k + 1} holds {len(inside)} roots of R, expected exactly one",
                                           gap=[lo, hi], roots=list(roots))
                lambdas.append(float(inside[0]))
        return CalibrationData(
            endpoints=list(E.endpoints),
            q_coeffs=[float(c) for c in d.q.coef],
            R_coeffs=[float(c) for c in d.R.coef],
            lambdas=lambdas,
        )

    def harmonic_measures(self, E: BandSet, nodes: Optional[int] = None) -> CalibrationData:
        """omega_k = |integral over band k of R / sqrt|q|| / pi."""
        nodes = nodes or settings.QUAD_NODES
        data = self.solve_R(E, nodes)
        d = self._prepare(E, nodes)
        periods = d.band_periods()
        omega = np.abs(periods) / math.pi
        if abs(math.fsum(omega) - 1.0) > OMEGA_SUM_TOL:
            if nodes < 16 * settings.QUAD_NODES:
                logger.info("Harmonic measures sum to %.3e off 1 at %s nodes; refining",
                            math.fsum(omega) - 1.0, nodes)
                return self.harmonic_measures(E, nodes * 4)
            raise ConvergenceError("Band quadrature did not converge", best=list(omega),
                                   residual=abs(math.fsum(omega) - 1.0))
        data.omega = [float(x) for x in omega]
        data.omega_signs = [int(np.sign(p)) for p in periods]
        return data

    def complex_green(self, E: BandSet, z: complex) -> complex:
        """G(z) = integral_{e_2r}^{z} R / sqrt(q), so g = Re G."""
        return self._prepare(E).complex_integral(z)

    def robin_constant(self, E: BandSet) -> float:
        return self._prepare(E).robin()

    def green_eval(self, E: BandSet, z: complex) -> GreenEvaluation:
        z = complex(z)
        d = self._prepare(E)
        robin = d.robin()
        if z.imag == 0 and E.band_index(z.real) >= 0:
            g = 0.0
        else:
            g = float(d.complex_integral(z).real)
            if g < -GREEN_NEGATIVE_TOL:
                raise ConsistencyError(f"Green function came out negative off the set: {g:.3e}",
                                       z=[z.real, z.imag])
            if g < 0.0:
                logger.debug("Clamping quadrature residue %.3e to 0 at z=%s", g, z)
                g = 0.0
        return GreenEvaluation(z=(z.real, z.imag), g=g, robin=robin)

    def equilibrium_density(self, E: BandSet, t: float) -> float:
        """|R(t)| / (pi sqrt|q(t)|) inside the bands, 0 elsewhere."""
        if E.band_index(t) < 0:
            return 0.0
        d = self._prepare(E)
        q = abs(float(d.q(t)))
        if q == 0.0:
            return math.inf
        return abs(float(d.R(t))) / (math.pi * math.sqrt(q))

    # ---- calibration ----

    @staticmethod
    def _integer_masses(omega: Sequence[float], m: int) -> List[int]:
        """k_j = round(m omega_j), every k_j >= 1, sum k_j = m."""
        k = [max(1, int(round(m * w))) for w in omega]
        while sum(k) > m:
            j = max((i for i in range(len(k)) if k[i] > 1), key=lambda i: (k[i] - m * omega[i], k[i]))
            k[j] -= 1
        while sum(k) < m:
            j = max(range(len(k)), key=lambda i: m * omega[i] - k[i])
            k[j] += 1
        return k

    @staticmethod
    def _grown(E: BandSet, s: np.ndarray, fixed: int) -> BandSet:
        """Grow every band except `fixed` by s_j on both sides; interior sides stop at gap midpoints."""
        e = list(E.endpoints)
        new = list(e)
        r = E.r
        j_free = [j for j in range(r) if j != fixed]
        for idx, j in enumerate(j_free):
            step = float(s[idx])
            lo, hi = 2 * j, 2 * j + 1
            left_cap = math.inf if j == 0 else (e[lo] - e[lo - 1]) / 2.0
            right_cap = math.inf if j == r - 1 else (e[hi + 1] - e[hi]) / 2.0
            new[lo] = e[lo] - min(step, left_cap)
            new[hi] = e[hi] + min(step, right_cap)
        return BandSet(tuple(new))

    def calibrate(self, E: BandSet, m: int) -> Tuple[BandSet, CalibrationData]:
        """
        Smallest-effort inflation E_m of E whose harmonic measures are k_j/m.

        Newton iteration with a finite-difference Jacobian on the outward
        growth of all bands but one (the band with the largest surplus).
        """
        if m < E.r:
            raise InvalidInputError(f"m = {m} is smaller than the band count {E.r}")
        base = self.harmonic_measures(E)
        k = self._integer_masses(base.omega, m)
        target = np.array(k, dtype=float) / m
        if np.max(np.abs(np.array(base.omega) - target)) <= CALIBRATION_TOL:
            base.N, base.n_k = m, k
            return E, base

        surplus = np.array(base.omega) - target
        order = sorted(range(E.r), key=lambda j: (-surplus[j], j))
        last_error: Optional[ConvergenceError] = None
        for fixed in order:
            try:
                s, iters = self._newton(E, target, fixed)
            except ConvergenceError as e:
                last_error = e
                continue
            if np.any(s < -1e-12):
                logger.info("Holding band %s fixed would shrink another band; trying the next", fixed + 1)
                continue
            E_m = self._grown(E, np.maximum(s, 0.0), fixed)
            data = self.harmonic_measures(E_m)
            data.N, data.n_k = m, k
            data.iterations = iters
            data.max_inflation = float(max(abs(a - b) for a, b in zip(E_m.endpoints, E.endpoints)))
            logger.info("Calibrated at m=%s after %s Newton step(s), inflation %.3e", m, iters, data.max_inflation)
            return E_m, data
        if last_error is not None:
            raise last_error
        raise ConvergenceError("No outward inflation reaches the target harmonic measures", best=list(E.endpoints))

    def _newton(self, E: BandSet, target: np.ndarray, fixed: int) -> Tuple[np.ndarray, int]:
        free = [j for j in range(E.r) if j != fixed]
        gaps = [hi - lo for lo, hi in E.gaps] or [E.hull[1] - E.hull[0]]
        h = 1e-6 * min(gaps)
        floor = -0.45 * min(hi - lo for lo, hi in E.bands)

        def residual(s: np.ndarray) -> np.ndarray:
            omega = self.harmonic_measures(self._grown(E, s, fixed)).omega
            return np.array([omega[j] - target[j] for j in free])

        s = np.zeros(len(free))
        res = residual(s)
        for it in range(1, settings.NEWTON_MAX_ITER + 1):
            Jac = np.zeros((len(free), len(free)))
            for c in range(len(free)):
                ds = np.zeros(len(free))
                ds[c] = h
                Jac[:, c] = (residual(s + ds) - res) / h
            try:
                step = np.linalg.solve(Jac, -res)
            except np.linalg.LinAlgError:
                raise ConvergenceError("Singular calibration Jacobian", best=list(s), residual=float(np.max(np.abs(res))))
            lam = 1.0
            while True:
                trial = np.maximum(s + lam * step, floor)
                trial_res = residual(trial)
                if np.max(np.abs(trial_res)) < np.max(np.abs(res)) or lam < 1e-4:
                    break
                lam /= 2.0
            s, res = trial, trial_res
            if np.max(np.abs(res)) <= settings.NEWTON_TOL:
                return s, it
        raise ConvergenceError("Calibration Newton iteration diverged", best=list(s),
                               residual=float(np.max(np.abs(res))))

    # ---- cosh construction ----

    def cosh_polynomial(self, E: BandSet, N: int, samples: Optional[int] = None) -> Tuple[Polynomial, Polynomial]:
        """
        f = cosh(N G) as a degree-N polynomial (recovered by FFT on a circle
        around E), and T = f / lead(f), the monic Chebyshev polynomial of E.
        """
        data = self.harmonic_measures(E)
        n_k = [int(round(N * w)) for w in data.omega]
        if max(abs(w - n / N) for w, n in zip(data.omega, n_k)) > CALIBRATION_TOL or min(n_k) < 1:
            raise PreconditionError(f"Band set is not calibrated at N = {N}", omega=data.omega)
        d = self._prepare(E)
        lo, hi = E.hull
        center = (lo + hi) / 2.0
        radius = (hi - lo) / 2.0 + 1.0
        M = samples or max(64, 1 << int(math.ceil(math.log2(4 * N + 4))))
        theta = 2.0 * np.pi * np.arange(M) / M
        zs = center + radius * np.exp(1j * theta)
        values = np.array([np.cosh(N * d.complex_integral(z)) for z in zs])
        laurent = np.fft.fft(values) / M
        coef_shift = laurent[: N + 1] / radius ** np.arange(N + 1)
        junk = np.max(np.abs(laurent[N + 1:])) if M > N + 1 else 0.0
        if junk > 1e-6 * np.max(np.abs(laurent[: N + 1])):
            raise ConsistencyError("cosh(N G) is not a polynomial of degree N on the sampling circle",
                                   residual=float(junk))
        f_shift = Polynomial(coef_shift.real)
        f = f_shift(Polynomial([-center, 1.0]))
        f = Polynomial(f.coef[: N + 1])

        grid = E.grid(max(32, 8 * N))
        if np.max(np.abs(f(grid))) > 1.0 + 1e-6:
            raise ConsistencyError("Recovered polynomial exceeds 1 on the band set", sup=float(np.max(np.abs(f(grid)))))
        nodes = hi + (hi - lo) * (np.arange(1, N + 2) / (N + 1))
        exact = np.cosh(N * np.array([d.right_leg(x - hi) for x in nodes]))
        if np.max(np.abs(f(nodes) - exact) / exact) > 1e-6:
            raise ConsistencyError("Recovered polynomial disagrees with cosh(N g) right of the bands")
        T = Polynomial(f.coef / f.coef[-1])
        logger.info("cosh construction: degree %s, leading coefficient %.12g", N, f.coef[-1])
        return f, T


calibration_service = CalibrationService()
