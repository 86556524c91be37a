"""
Chebyshev Service

Monic Chebyshev polynomials: closed form on an interval, composition with the
Naiman polynomial of a periodic Jacobi matrix, equioscillation checks on band
sets, and a Remez exchange on unions of intervals used as an independent oracle.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, List, Tuple, Union

import numpy as np
from mpmath import mp
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import Polynomial
from scipy.optimize import brentq, minimize_scalar

from potentia.exceptions import ConvergenceError, InvalidInputError
from potentia.models.chebyshev import EquioscillationReport
from potentia.models.compact import BandSet
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.polynomial import RationalPoly
from potentia.services.jacobi_service import jacobi_service

logger = logging.getLogger(__name__)

ALTERNATION_RTOL = 1e-8
REMEZ_SPREAD = 1e-8
GRID_PER_DEGREE = 10

PolyInput = Union[RationalPoly, Polynomial]
Evaluator = Callable[[float], float]


def _evaluator(p: PolyInput) -> Evaluator:
    """Real evaluator; exact polynomials of higher degree go through mpmath."""
    if isinstance(p, Polynomial):
        coef = np.real_if_close(p.coef)
        return lambda x: float(np.polynomial.polynomial.polyval(x, coef).real)
    if not p.is_real:
        raise InvalidInputError("Equioscillation is only defined for real polynomials")
    if p.degree <= 8:
        coef = p.to_numpy().coef
        return lambda x: float(np.polynomial.polynomial.polyval(x, coef))
    size = p.scale() / abs(p.leading)
    dps = max(30, 20 + int(math.log10(size + 1.0)) + 1 + p.degree // 4)
    with mp.workdps(dps):
        coeffs = [mp.mpf(c.re.numerator) / c.re.denominator for c in reversed(p.coeffs)]

    def f(x: float) -> float:
        with mp.workdps(dps):
            return float(mp.polyval(coeffs, mp.mpf(float(x))))

    return f


def band_extrema(f: Evaluator, xs: np.ndarray) -> List[Tuple[float, float]]:
    """(x, p(x)) at local maxima of |p| on one band, grid scan plus golden refinement."""
    vals = np.array([f(x) for x in xs])
    mags = np.abs(vals)
    lo, hi = xs[0], xs[-1]
    found = [(float(lo), float(vals[0]))]
    for i in range(1, len(xs) - 1):
        if mags[i] < mags[i - 1] or mags[i] < mags[i + 1] or mags[i] == 0.0:
            continue
        x_best, v_best = float(xs[i]), float(vals[i])
        try:
            res = minimize_scalar(lambda t: -abs(f(t)), bracket=(xs[i - 1], xs[i], xs[i + 1]),
                                  method="golden", tol=1e-12)
            if lo <= res.x <= hi and -res.fun >= mags[i]:
                x_best, v_best = float(res.x), f(res.x)
        except ValueError:
            # flat neighbourhood, grid point is as good as it gets
            pass
        if abs(x_best - found[-1][0]) > 1e-12 * (1.0 + abs(x_best)):
            found.append((x_best, v_best))
    if abs(hi - found[-1][0]) > 1e-12 * (1.0 + abs(hi)):
        found.append((float(hi), float(vals[-1])))
    return found


def _band_zeros(f: Evaluator, xs: np.ndarray) -> List[float]:
    vals = np.array([f(x) for x in xs])
    zeros: List[float] = []
    for i in range(len(xs)):
        if vals[i] == 0.0:
            zeros.append(float(xs[i]))
        elif i + 1 < len(xs) and vals[i] * vals[i + 1] < 0.0:
            zeros.append(float(brentq(f, xs[i], xs[i + 1], xtol=1e-14)))
    return zeros


def _sign_runs(values: List[float]) -> int:
    runs, last = 0, 0
    for v in values:
        s = 1 if v > 0 else -1
        if s != last:
            runs += 1
            last = s
    return runs


class ChebyshevService:

    def chebyshev_kernel(self, n: int) -> RationalPoly:
        """Monic Chebyshev polynomial of [-2, 2]: C_0 = 2, C_1 = z, C_{k+1} = z C_k - C_{k-1}."""
        if n < 0:
            raise InvalidInputError(f"Degree must be non-negative, got {n}")
        if n == 0:
            return RationalPoly.constant(1)
        z = RationalPoly.identity()
        prev, cur = RationalPoly.constant(2), z
        for _ in range(n - 1):
            prev, cur = cur, z * cur - prev
        return cur

    def monic_chebyshev_interval(self, a, b, n: int) -> RationalPoly:
        """h^n C_n((x - c)/h) with c the midpoint and h = (b - a)/4; sup norm 2 h^n."""
        if n < 1:
            raise InvalidInputError(f"Degree must be at least 1, got {n}")
        a, b = Fraction(a), Fraction(b)
        if not a < b:
            raise InvalidInputError(f"Need a < b, got [{float(a)}, {float(b)}]")
        h = (b - a) / 4
        c = (a + b) / 2
        inner = RationalPoly([-c / h, 1 / h])
        return self.chebyshev_kernel(n).compose(inner) * (h ** n)

    def chebyshev_compose(self, J: PeriodicJacobi, n: int) -> RationalPoly:
        """Monic B^n C_n(P/B) of degree n*r; its sup norm on the spectrum is 2|B|^n."""
        P, B, _ = jacobi_service.naiman_polynomial(J)
        return self.compose_naiman(P, B, n)

    def compose_naiman(self, P: RationalPoly, B, n: int) -> RationalPoly:
        """B^n C_n(P/B) by Q_{k+1} = P Q_k - B^2 Q_{k-1}, Q_0 = 2, Q_1 = P."""
        if n < 1:
            raise InvalidInputError(f"Degree must be at least 1, got {n}")
        B2 = B * B
        prev, cur = RationalPoly.constant(2), P
        for _ in range(n - 1):
            prev, cur = cur, P * cur - prev * B2
        logger.debug("Composed Chebyshev polynomial of degree %s", cur.degree)
        return cur

    def equioscillation_check(self, p: PolyInput, E: BandSet, grid: int) -> EquioscillationReport:
        """Extrema of |p| on E, sign alternations among the near-maximal ones, zero spacing per band."""
        degree = p.degree if isinstance(p, RationalPoly) else p.degree()
        if grid < GRID_PER_DEGREE * max(degree, 1):
            raise InvalidInputError(f"grid must be at least {GRID_PER_DEGREE}*deg(p) = {GRID_PER_DEGREE * degree}, got {grid}")
        f = _evaluator(p)
        pts = E.grid(grid)
        extrema: List[Tuple[float, float]] = []
        zero_gaps: List[float] = []
        band_gaps: List[float] = []
        for j in range(E.r):
            xs = pts[j * grid:(j + 1) * grid]
            extrema.extend(band_extrema(f, xs))
            zeros = _band_zeros(f, xs)
            gaps = list(np.diff(zeros)) if len(zeros) > 1 else []
            zero_gaps.extend(float(g) for g in gaps)
            band_gaps.append(float(max(gaps)) if gaps else 0.0)

        norm = max(abs(v) for _, v in extrema)
        near = [(x, v) for x, v in extrema if abs(v) >= (1.0 - ALTERNATION_RTOL) * norm]
        count = _sign_runs([v for _, v in near])
        logger.debug("Equioscillation: norm %.6g, %s alternations over %s points", norm, count, len(near))
        return EquioscillationReport(
            norm=float(norm),
            alternation_points=[x for x, _ in near],
            alternation_count=count,
            alternation_signs=[1 if v > 0 else -1 for _, v in near],
            zero_gaps=zero_gaps,
            band_zero_gaps=band_gaps,
        )

    def chebyshev_norm_ratio(self, J: PeriodicJacobi, n: int) -> float:
        """||P_n||^(1/(nr)) / |B|^(1/r) on the spectrum; lies in [1, 2^(1/(nr))]."""
        spectrum = jacobi_service.spectrum_bands(J)
        Pn = self.chebyshev_compose(J, n)
        report = self.equioscillation_check(Pn, spectrum.bands, GRID_PER_DEGREE * Pn.degree + 1)
        nr = n * J.r
        return report.norm ** (1.0 / nr) / jacobi_service.jacobi_capacity(J)

    # ---- Remez ----

    def remez_union(self, E: BandSet, n: int, max_iters: int = 50) -> Polynomial:
        """
        Monic minimax polynomial of degree n on E by the Remez exchange.

        Works in s = (x - c)/h on the hull [-1, 1] with a Chebyshev basis for
        the degree < n part; returns power coefficients in x.
        """
        if n < 1:
            raise InvalidInputError(f"Degree must be at least 1, got {n}")
        lo, hi = E.hull
        c, h = (lo + hi) / 2.0, (hi - lo) / 2.0
        Es = E.translated(-c).scaled(1.0 / h)
        per_band = max(201, 20 * n + 1)
        dense = Es.grid(per_band)
        target = npcheb.poly2cheb([0.0] * n + [1.0])
        ref = dense[np.round(np.linspace(0, len(dense) - 1, n + 1)).astype(int)]

        best, best_spread = None, math.inf
        for it in range(max_iters):
            A = np.empty((n + 1, n + 1))
            A[:, :n] = npcheb.chebvander(ref, n - 1)
            A[:, n] = (-1.0) ** np.arange(n + 1)
            try:
                sol = np.linalg.solve(A, npcheb.chebval(ref, target))
            except np.linalg.LinAlgError:
                raise ConvergenceError("Singular Remez system", best=best, residual=best_spread)
            err_cheb = target.copy()
            err_cheb[:n] -= sol[:n]

            def err(s, coef=err_cheb):
                return float(npcheb.chebval(s, coef))

            extrema: List[Tuple[float, float]] = []
            for j in range(Es.r):
                extrema.extend(band_extrema(err, dense[j * per_band:(j + 1) * per_band]))
            alternating = self._alternating(extrema)
            if len(alternating) < n + 1:
                raise ConvergenceError(
                    f"Remez exchange found only {len(alternating)} alternations, need {n + 1}",
                    best=best, residual=best_spread,
                )
            self._trim(alternating, n + 1)
            emax = max(abs(v) for _, v in extrema)
            emin = min(abs(v) for _, v in alternating)
            spread = (emax - emin) / emax
            candidate = self._to_power(err_cheb, c, h, n)
            if spread < best_spread:
                best, best_spread = candidate, spread
            logger.debug("Remez iteration %s: levelled error %.3e, spread %.3e", it, emax, spread)
            if spread <= REMEZ_SPREAD:
                logger.info("Remez converged in %s iteration(s), degree %s, %s band(s)", it + 1, n, E.r)
                return candidate
            new_ref = np.array([x for x, _ in alternating])
            if np.allclose(new_ref, ref, rtol=0.0, atol=1e-15):
                raise ConvergenceError("Remez exchange stagnated", best=best, residual=best_spread)
            ref = new_ref
        raise ConvergenceError(f"Remez did not converge in {max_iters} iterations", best=best, residual=best_spread)

    @staticmethod
    def _alternating(extrema: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        """Collapse same-sign neighbours to the largest one."""
        out: List[Tuple[float, float]] = []
        for x, v in sorted(extrema):
            if v == 0.0:
                continue
            if out and (out[-1][1] > 0) == (v > 0):
                if abs(v) > abs(out[-1][1]):
                    out[-1] = (x, v)
            else:
                out.append((x, v))
        return out

    @staticmethod
    def _trim(points: List[Tuple[float, float]], size: int) -> None:
        """Drop the weakest alternations until `size` remain, keeping signs alternating."""
        while len(points) > size:
            k = min(range(len(points)), key=lambda i: abs(points[i][1]))
            if k == 0 or k == len(points) - 1:
                points.pop(k)
            elif len(points) - 2 >= size:
                left, right = points[k - 1], points[k + 1]
                keep = left if abs(left[1]) >= abs(right[1]) else right
                points[k - 1:k + 2] = [keep]
            elif abs(points[0][1]) < abs(points[-1][1]):
                points.pop(0)
            else:
                points.pop()

    @staticmethod
    def _to_power(err_cheb: np.ndarray, c: float, h: float, n: int) -> Polynomial:
        in_s = Polynomial(npcheb.cheb2poly(err_cheb))
        p = in_s(Polynomial([-c / h, 1.0 / h])) * (h ** n)
        coef = p.coef.copy()
        coef[n] = 1.0
        return Polynomial(coef[:n + 1])


chebyshev_service = ChebyshevService()
