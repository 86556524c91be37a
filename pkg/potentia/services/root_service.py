"""
Root Finding Service

Simultaneous Aberth-Ehrlich iteration, with the companion-matrix
eigenvalues as fallback. Exact polynomials are solved in mpmath at a working
precision derived from the coefficient sizes, so high-degree compositions
with huge coefficients keep accurate roots.
"""
import logging
import math
from typing import Optional, Sequence, Union

import numpy as np
from mpmath import mp

from potentia.config import settings
from potentia.exceptions import ConvergenceError, InvalidInputError
from potentia.models.polynomial import RationalPoly

logger = logging.getLogger(__name__)

PolyLike = Union[RationalPoly, Sequence[complex], np.ndarray, np.polynomial.Polynomial]


def _sort_roots(z: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.round(z.imag, 12), np.round(z.real, 12)))
    return z[order]


def backward_error(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|p(z)| / sum |a_k| |z|^k for ascending float coefficients."""
    num = np.abs(np.polynomial.polynomial.polyval(z, coeffs))
    den = np.polynomial.polynomial.polyval(np.abs(z), np.abs(coeffs))
    return num / np.where(den > 0, den, 1.0)


def absolute_residual(coeffs: np.ndarray, z: np.ndarray) -> float:
    """max |p(z)| / max_k |a_k|, the residual in units of the coefficient scale."""
    scale = float(np.max(np.abs(coeffs)))
    return float(np.max(np.abs(np.polynomial.polynomial.polyval(z, coeffs)))) / scale


def _cauchy_radius(coeffs: np.ndarray) -> float:
    lead = abs(coeffs[-1])
    return 1.0 + float(np.max(np.abs(coeffs[:-1]))) / lead


def _aberth_float(coeffs: np.ndarray, tol: float, max_iter: int):
    n = len(coeffs) - 1
    radius = _cauchy_radius(coeffs)
    # offset angle keeps the start off the real axis symmetry
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    deriv = np.polynomial.polynomial.polyder(coeffs)
    for it in range(max_iter):
        p = np.polynomial.polynomial.polyval(z, coeffs)
        dp = np.polynomial.polynomial.polyval(z, deriv)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 1e-8 * (1.0 + np.abs(z)))
        z = z - w
        if np.all(np.abs(w) <= tol * (1.0 + np.abs(z))):
            return z, it + 1
    return z, max_iter


class RootService:
    """Roots of polynomials with a residual contract."""

    def roots(self, p: PolyLike, tol: Optional[float] = None, max_iter: Optional[int] = None) -> np.ndarray:
        """
        All deg(p) roots, with multiplicity, sorted lexicographically.

        Each root r satisfies |p(r)| <= tol * sum_k |a_k| |r|^k; this equals
        the scale(p) contract whenever |r| <= 1 and is the achievable
        backward error otherwise.
        """
        tol = tol or settings.ROOT_TOL
        max_iter = max_iter or settings.ROOT_MAX_ITER
        if isinstance(p, RationalPoly):
            if p.degree < 1:
                raise InvalidInputError("roots() needs degree >= 1")
            return self._roots_exact(p, tol, max_iter)
        coeffs = self._float_coeffs(p)
        return self._roots_float(coeffs, tol, max_iter)

    # ---- float path ----

    @staticmethod
    def _float_coeffs(p: PolyLike) -> np.ndarray:
        if isinstance(p, np.polynomial.Polynomial):
            coeffs = np.asarray(p.coef, dtype=complex)
        else:
            coeffs = np.asarray(p, dtype=complex)
        nz = np.nonzero(coeffs)[0]
        if len(nz) == 0 or nz[-1] < 1:
            raise InvalidInputError("roots() needs degree >= 1")
        coeffs = coeffs[: nz[-1] + 1]
        if not np.all(np.isfinite(coeffs)):
            raise InvalidInputError("polynomial coefficients must be finite")
        return coeffs

    def _roots_float(self, coeffs: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
        # zero roots split off exactly
        lead_zeros = 0
        while coeffs[lead_zeros] == 0:
            lead_zeros += 1
        core = coeffs[lead_zeros:]
        found = np.zeros(0, dtype=complex)
        if len(core) > 1:
            z, iters = _aberth_float(core, 1e-15, max_iter)
            err = backward_error(core, z)
            if not np.all(err <= tol):
                logger.info("Aberth stalled after %s iterations (residual %.3e); using companion eigenvalues",
                            iters, float(np.max(err)))
                alt = np.polynomial.polynomial.polyroots(core).astype(complex)
                alt_err = backward_error(core, alt)
                if np.max(alt_err) < np.max(err):
                    z, err = alt, alt_err
            if not np.all(err <= tol):
                raise ConvergenceError(
                    f"Root finding did not reach residual {tol:g}",
                    best=_sort_roots(z), residual=float(np.max(err)),
                )
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("Float roots of degree %s: backward residual %.3e, absolute residual %.3e",
                             len(core) - 1, float(np.max(err)), absolute_residual(core, z))
            found = z
        return _sort_roots(np.concatenate([np.zeros(lead_zeros, dtype=complex), found]))

    # ---- exact path ----

    @staticmethod
    def _working_dps(p: RationalPoly) -> int:
        size = max(abs(c) for c in p.coeffs) / abs(p.leading)
        digits = int(math.log10(size + 1.0)) + 1
        return max(30, 20 + digits + p.degree // 4)

    def _roots_exact(self, p: RationalPoly, tol: float, max_iter: int) -> np.ndarray:
        coeffs_c = np.array(p.complex_coeffs(), dtype=complex)
        try:
            start = np.polynomial.polynomial.polyroots(coeffs_c).astype(complex)
        except np.linalg.LinAlgError:
            start = _aberth_float(coeffs_c, 1e-12, 50)[0]
        if not np.all(np.isfinite(start)):
            start = _aberth_float(coeffs_c, 1e-12, 50)[0]
        with mp.workdps(self._working_dps(p)):
            mcoeffs = [mp.mpc(mp.mpf(c.re.numerator) / c.re.denominator,
                              mp.mpf(c.im.numerator) / c.im.denominator) for c in p.coeffs]
            mderiv = [k * mcoeffs[k] for k in range(1, len(mcoeffs))]
            z = [mp.mpc(complex(s)) for s in start]
            # separate exact coincidences so the Aberth sum stays finite
            for i in range(len(z)):
                for j in range(i):
                    if z[i] == z[j]:
                        z[i] += mp.mpc(0, 1) * mp.mpf(10) ** (-8) * (i + 1)
            step_tol = mp.mpf(10) ** (-(mp.dps - 5))
            for _ in range(max_iter):
                biggest = mp.mpf(0)
                new_z = list(z)
                for i, zi in enumerate(z):
                    pv = mp.polyval(mcoeffs[::-1], zi)
                    if pv == 0:
                        continue
                    dpv = mp.polyval(mderiv[::-1], zi)
                    s = mp.fsum(1 / (zi - zj) for j, zj in enumerate(z) if j != i and zi != zj)
                    ratio = pv / dpv if dpv != 0 else mp.mpf(10) ** (-8)
                    w = ratio / (1 - ratio * s)
                    new_z[i] = zi - w
                    biggest = max(biggest, abs(w) / (1 + abs(zi)))
                z = new_z
                if biggest <= step_tol:
                    break
            residual, absolute = 0.0, 0.0
            scale = max(abs(c) for c in mcoeffs)
            for zi in z:
                num = abs(mp.polyval(mcoeffs[::-1], zi))
                den = mp.polyval([abs(c) for c in mcoeffs[::-1]], abs(zi))
                residual = max(residual, float(num / den) if den else float(num))
                absolute = max(absolute, float(num / scale))
            result = np.array([complex(zi) for zi in z], dtype=complex)
        logger.debug("Exact roots of degree %s: backward residual %.3e, absolute residual %.3e",
                     p.degree, residual, absolute)
        if not residual <= tol:
            raise ConvergenceError(
                f"Root finding did not reach residual {tol:g}",
                best=_sort_roots(result), residual=residual, absolute_residual=absolute,
            )
        return _sort_roots(result)


root_service = RootService()
