"""
Periodic Jacobi Service

Naiman polynomial, band spectrum, capacity and coefficient rationalization of
period-r Jacobi matrices.
"""
import logging
import math
import random
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from potentia.exceptions import ConsistencyError, InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.jacobi import BandSpectrum, PeriodicJacobi
from potentia.models.polynomial import RationalPoly
from potentia.models.scalar import GaussianRational, ONE, ZERO
from potentia.services.core_service import core_service
from potentia.services.root_service import root_service

logger = logging.getLogger(__name__)

TRACE_CHECKS = 20
EDGE_IMAG_TOL = 1e-7
TOUCH_TOL = 1e-12

Matrix2 = Tuple[GaussianRational, GaussianRational, GaussianRational, GaussianRational]


def _matmul(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3],
    )


def _round_to_grid(x: Fraction, denom_bound: int) -> Fraction:
    if x.denominator <= denom_bound:
        return x
    return Fraction(round(x * denom_bound), denom_bound)


class JacobiService:

    def naiman_polynomial(self, J: PeriodicJacobi, check_seed: int = 0) -> Tuple[RationalPoly, GaussianRational, RationalPoly]:
        """
        (P, B, P/B) with P monic of degree r and sigma(J) = (P/B)^{-1}[-2, 2].

        P = D(1,r) - b_r^2 D(2,r-1), where D(i,j) = det(z - J[i..j]) of the
        finite truncation. Always cross-checked against the trace of the
        period transfer matrix at random rational points.
        """
        a, b = J.diag, J.offdiag
        r = J.r
        z = RationalPoly.identity()
        if r == 1:
            P = z - a[0]
        else:
            P = self._truncated_det(a, b, 0, r - 1) - self._truncated_det(a, b, 1, r - 2) * (b[-1] * b[-1])
        B = J.modulus
        P_tilde = P / B
        self._check_trace(J, P_tilde, check_seed)
        return P, B, P_tilde

    @staticmethod
    def _truncated_det(a, b, i: int, j: int) -> RationalPoly:
        """det(z - J[i..j]) by the three-term recurrence (0-based, inclusive)."""
        z = RationalPoly.identity()
        prev, cur = RationalPoly.constant(1), z - a[i]
        if j < i:
            return prev
        for k in range(i + 1, j + 1):
            prev, cur = cur, (z - a[k]) * cur - prev * (b[k - 1] * b[k - 1])
        return cur

    def transfer_trace(self, J: PeriodicJacobi, z) -> GaussianRational:
        """Trace of M_r ... M_1, M_n = [[(z - a_n)/b_n, -b_{n-1}/b_n], [1, 0]], b_0 = b_r."""
        z = GaussianRational.coerce(z)
        a, b = J.diag, J.offdiag
        acc: Matrix2 = (ONE, ZERO, ZERO, ONE)
        for n in range(J.r):
            prev_b = b[n - 1] if n > 0 else b[-1]
            m: Matrix2 = ((z - a[n]) / b[n], -prev_b / b[n], ONE, ZERO)
            acc = _matmul(m, acc)
        return acc[0] + acc[3]

    def _check_trace(self, J: PeriodicJacobi, P_tilde: RationalPoly, seed: int) -> None:
        rng = random.Random(seed)
        for _ in range(TRACE_CHECKS):
            z = GaussianRational(Fraction(rng.randint(-997, 997), rng.randint(1, 97)),
                                 Fraction(rng.randint(-97, 97), rng.randint(1, 31)))
            lhs, rhs = P_tilde(z), self.transfer_trace(J, z)
            if lhs != rhs:
                raise ConsistencyError(
                    "Naiman polynomial disagrees with the transfer-matrix trace",
                    z=str(z), naiman=str(lhs), trace=str(rhs),
                )

    def spectrum_bands(self, J: PeriodicJacobi) -> BandSpectrum:
        """Bands = preimage of [-2, 2] under P/B; touching bands are merged."""
        if not J.is_real:
            raise InvalidInputError("spectrum_bands needs a real Jacobi matrix")
        P, B, P_tilde = self.naiman_polynomial(J)
        edges: List[float] = []
        for level in (2, -2):
            shifted = P - B * level
            for factor, mult in core_service.squarefree_decomposition(shifted):
                for root in root_service.roots(factor):
                    if abs(root.imag) > EDGE_IMAG_TOL * (1.0 + abs(root)):
                        raise ConsistencyError(
                            "Band edge with nonzero imaginary part; numerical failure",
                            root=[root.real, root.imag],
                        )
                    edges.extend([float(root.real)] * mult)
        edges.sort()
        if len(edges) != 2 * J.r:
            raise ConsistencyError(f"Expected {2 * J.r} band edges, found {len(edges)}")

        ends: List[float] = [edges[0]]
        multiplicity: List[int] = []
        touching: List[float] = []
        count = 1
        for j in range(1, J.r):
            right, left = edges[2 * j - 1], edges[2 * j]
            if abs(left - right) <= TOUCH_TOL * (1.0 + abs(left)):
                touching.append((left + right) / 2.0)
                count += 1
            else:
                ends.extend([right, left])
                multiplicity.append(count)
                count = 1
        ends.append(edges[-1])
        multiplicity.append(count)
        bands = BandSet(tuple(ends), tuple(multiplicity), tuple(touching))

        zeros = sorted(float(z.real) for z in root_service.roots(P))
        values = tuple(float(P_tilde(e).real) for e in edges)
        logger.info("Spectrum of period-%s Jacobi matrix: %s band(s), %s closed gap(s)",
                    J.r, bands.r, len(touching))
        return BandSpectrum(bands=bands, band_zeros=tuple(zeros), band_edges=tuple(edges), edge_values=values)

    def jacobi_capacity(self, J: PeriodicJacobi) -> float:
        """|b_1 ... b_r|^(1/r), from the exact modulus."""
        norm = J.modulus.norm()
        log_abs = (math.log(norm.numerator) - math.log(norm.denominator)) / 2.0
        return math.exp(log_abs / J.r)

    def rationalize(self, J: PeriodicJacobi, denom_bound: int) -> PeriodicJacobi:
        """
        Round every entry to the grid 1/denom_bound; entries whose denominator
        is already <= denom_bound are left alone.
        """
        if not isinstance(denom_bound, int) or denom_bound < 1:
            raise InvalidInputError(f"denom_bound must be a positive integer, got {denom_bound!r}")

        def snap(x: GaussianRational) -> GaussianRational:
            return GaussianRational(_round_to_grid(x.re, denom_bound), _round_to_grid(x.im, denom_bound))

        a = tuple(snap(x) for x in J.diag)
        b = tuple(snap(x) for x in J.offdiag)
        for i, bi in enumerate(b, start=1):
            if bi.is_zero:
                raise InvalidInputError(f"b_{i} rounds to zero at denominator {denom_bound}; increase denom_bound")
        return PeriodicJacobi(a, b)

    def rationalization_error(self, J: PeriodicJacobi, Jq: PeriodicJacobi) -> Dict[str, float]:
        """Largest entrywise change and the resulting bound on the spectral shift."""
        if J.r != Jq.r:
            raise InvalidInputError("Jacobi matrices have different periods")
        err = max(abs(x - y) for x, y in zip(J.diag + J.offdiag, Jq.diag + Jq.offdiag))
        return {"entry_error": err, "spectral_bound": 3.0 * err}

    def jacobi_for_bands(self, E: BandSet) -> PeriodicJacobi:
        """
        Explicit Jacobi matrix with spectrum E, for a single interval or a pair
        of mirror-image bands c +- [alpha, beta].
        """
        e = [Fraction(x) for x in E.endpoints]
        if E.r == 1:
            return PeriodicJacobi(((e[0] + e[1]) / 2,), ((e[1] - e[0]) / 4,))
        if E.r == 2:
            center = (e[0] + e[3]) / 2
            if abs(float((e[1] + e[2]) / 2 - center)) <= 1e-12 * (1.0 + abs(float(center))):
                alpha, beta = e[2] - center, e[3] - center
                return PeriodicJacobi((center, center), ((beta - alpha) / 2, (beta + alpha) / 2))
        raise InvalidInputError(
            "No explicit Jacobi matrix for this band set; use calibrate and cosh_polynomial",
            endpoints=list(E.endpoints),
        )

    def band_polynomial_error(self, J: PeriodicJacobi, spectrum: BandSpectrum) -> float:
        """max | |P~(edge)| - 2 | over the band edges."""
        return float(np.max(np.abs(np.abs(np.array(spectrum.edge_values)) - 2.0)))


jacobi_service = JacobiService()
