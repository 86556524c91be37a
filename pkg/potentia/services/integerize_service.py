"""
Integer Lift Service

Turns P^c, for a monic rational P, into a monic polynomial with Gaussian-integer
coefficients by adding lambda_j^(i) z^(K-j) P^(c-a-i) corrections, certifies by
sampling that the zeros stay inside the lemniscate |P| < R2, and chains
everything into the equidistribution pipeline.
"""
import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from potentia.config import settings
from potentia.exceptions import (
    BudgetExceededError, ComputationRefusedError, ConsistencyError, InvalidInputError, PreconditionError,
)
from potentia.models.compact import BandSet
from potentia.models.integerize import LiftCertificate, LiftParams, PipelineReport, PipelineStage
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.measure import DiscreteMeasure
from potentia.models.polynomial import GaussianIntPoly, RationalPoly
from potentia.models.potential import CapacityScheme
from potentia.models.scalar import GaussianRational
from potentia.services.calibration_service import calibration_service
from potentia.services.chebyshev_service import chebyshev_service
from potentia.services.core_service import core_service
from potentia.services.jacobi_service import jacobi_service
from potentia.services.potential_service import potential_service
from potentia.services.root_service import root_service
from potentia.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

CAPACITY_TOL = 1e-9
MONOTONE_SLACK = 1e-9


def _truncated_mul(x: RationalPoly, y: RationalPoly, order: int) -> RationalPoly:
    return RationalPoly((x * y).coeffs[:order])


def _revalidated(cert: LiftCertificate, **changes) -> LiftCertificate:
    # model_copy skips validation; numpy scalars would reach the JSON writer
    return LiftCertificate.model_validate({**dict(cert), **changes})


def _band_counts(E: BandSet, mu: DiscreteMeasure, degree: int) -> List[int]:
    counts = [0] * E.r
    for z, w in mu.atoms:
        dists = [abs(complex(z) - complex(min(max(z.real, lo), hi))) for lo, hi in E.bands]
        counts[int(np.argmin(dists))] += int(round(w * degree))
    return counts


class IntegerizeService:

    # ---- lifting ----

    def protected_coefficients(self, P: RationalPoly, a: int, c: int) -> List[Tuple[int, GaussianRational]]:
        """
        (degree, coefficient) of z^(Kc-1) down to z^(K(c-a)) in P^c, from the
        truncated power of the reversed polynomial.
        """
        K = P.degree
        order = a * K + 1
        rev = RationalPoly(reversed(P.coeffs))
        acc, base, k = RationalPoly.constant(1), RationalPoly(rev.coeffs[:order]), c
        while k:
            if k & 1:
                acc = _truncated_mul(acc, base, order)
            k >>= 1
            if k:
                base = _truncated_mul(base, base, order)
        return [(K * c - t, acc.coefficient(t)) for t in range(1, order)]

    def factorial_schedule(self, K: int, m: int, a: int) -> Tuple[int, int]:
        """b = a^K and c = b! m^b; always admissible, usually astronomically large."""
        b = a ** K
        return b, math.factorial(b) * m ** b

    def find_lift_exponent(self, P: RationalPoly, a: int = 1, budget: Optional[int] = None) -> int:
        """Smallest c > a, up to the budget, whose protected coefficients are Gaussian integers."""
        budget = budget or settings.LIFT_EXPONENT_BUDGET
        for c in range(a + 1, budget + 1):
            if all(x.is_gaussian_integer for _, x in self.protected_coefficients(P, a, c)):
                return c
        raise BudgetExceededError(f"No admissible lift exponent c <= {budget} for a = {a}",
                                  degree=P.degree, denominator=P.denominator)

    def identity_certificate(self, P: RationalPoly) -> LiftCertificate:
        if not (P.is_monic and P.is_gaussian_integral):
            raise InvalidInputError("identity_certificate needs a monic Gaussian-integer polynomial")
        return LiftCertificate(
            gamma=GaussianIntPoly.from_poly(P),
            lambdas=[],
            params=LiftParams(K=P.degree, m=1, a=0, c=1),
            rouche_margin=0.0,
            certified=True,
            certified_half=True,
        )

    def integer_lift(self, P: RationalPoly, a: int, c: int) -> LiftCertificate:
        """
        Gamma = P^c + sum_i sum_j lambda_j^(i) z^(K-j) P^(c-a-i), with each lambda
        picked in descending degree as minus the distance of the current
        coefficient to its nearest Gaussian integer.
        """
        if not P.is_monic or P.degree < 1:
            raise InvalidInputError("The lift needs a monic polynomial of degree >= 1")
        if not (1 <= a < c):
            raise InvalidInputError(f"Need 1 <= a < c, got a={a}, c={c}")
        if c > settings.LIFT_EXPONENT_BUDGET:
            raise BudgetExceededError(f"Lift exponent c = {c} exceeds the budget {settings.LIFT_EXPONENT_BUDGET}")
        for degree, coef in self.protected_coefficients(P, a, c):
            if not coef.is_gaussian_integer:
                raise PreconditionError(
                    f"Coefficient of z^{degree} in P^{c} is {coef}, not a Gaussian integer",
                    degree=degree, coefficient=str(coef),
                )
        K = P.degree
        gamma = list(core_service.poly_pow_exact(P, c).coeffs)
        powers = [RationalPoly.constant(1)]
        for _ in range(c - a - 1):
            powers.append(powers[-1] * P)

        lambdas: List[List[GaussianRational]] = []
        for i in range(1, c - a + 1):
            row = []
            power = powers[c - a - i]
            for j in range(1, K + 1):
                d = K * (c - a - i + 1) - j
                lam = gamma[d].round() - gamma[d]
                if not lam.is_zero:
                    shift = K - j
                    for k, pc in enumerate(power.coeffs):
                        gamma[k + shift] = gamma[k + shift] + lam * pc
                row.append(lam)
            lambdas.append(row)

        result = RationalPoly(gamma)
        if not result.is_gaussian_integral:
            raise ConsistencyError("Lift left a non-integral coefficient")
        logger.info("Lifted degree-%s polynomial with a=%s, c=%s", K, a, c)
        return LiftCertificate(
            gamma=GaussianIntPoly.from_poly(result),
            lambdas=lambdas,
            params=LiftParams(K=K, m=P.denominator, a=a, c=c),
        )

    # ---- certification ----

    def rouche_certify(self, P: RationalPoly, cert: LiftCertificate, R2: float,
                       n_samples: Optional[int] = None) -> LiftCertificate:
        """
        Sampled margin max |Gamma - P^c| / |P|^c on the lemniscate |P| = R2.
        The difference is evaluated in its lambda form so no huge Gamma
        coefficients enter floating point.
        """
        n_samples = n_samples or settings.LEMNISCATE_SAMPLES
        if not R2 > 1.0:
            raise InvalidInputError(f"R2 must exceed 1, got {R2}")
        if n_samples < 64:
            raise InvalidInputError(f"Need at least 64 lemniscate samples, got {n_samples}")
        K, a, c = cert.params.K, cert.params.a, cert.params.c
        coeffs = np.array(P.complex_coeffs(), dtype=complex)
        lam = np.array([[complex(x) for x in row] for row in cert.lambdas], dtype=complex).reshape(-1, K)

        def sample(theta: float) -> Tuple[float, float]:
            shifted = coeffs.copy()
            shifted[0] -= R2 * np.exp(1j * theta)
            zs = root_service.roots(shifted)
            worst, m_sum = 0.0, 0.0
            for z in zs:
                pz = complex(np.polynomial.polynomial.polyval(z, coeffs))
                diff = 0j
                for i in range(1, len(lam) + 1):
                    inner = sum(lam[i - 1][j - 1] * z ** (K - j) for j in range(1, K + 1))
                    diff += inner * pz ** (c - a - i)
                worst = max(worst, abs(diff) / abs(pz) ** c)
                m_sum = max(m_sum, sum(abs(z) ** (K - j) for j in range(1, K + 1)))
            return worst, m_sum

        if lam.size == 0:
            margin, M = 0.0, 0.0
        else:
            thetas = 2.0 * np.pi * np.arange(n_samples) / n_samples
            results = ordered_map(sample, thetas)
            margin = float(max(r[0] for r in results))
            M = float(max(r[1] for r in results))
        bound = 2.0 * M / (R2 ** a * (R2 - 1.0)) if a >= 1 else 0.0
        logger.info("Sampled Rouche margin %.6g at R2=%s (%s samples)", margin, R2, n_samples)
        return _revalidated(
            cert,
            rouche_margin=margin,
            analytic_bound=float(bound),
            certified=bool(margin < 1.0),
            certified_half=bool(margin <= 0.5),
            params=LiftParams.model_validate({**cert.params.model_dump(), "R2": float(R2)}),
        )

    def zero_localization(self, cert: LiftCertificate, P: RationalPoly, R2: float,
                          bands: Optional[BandSet] = None) -> LiftCertificate:
        """Roots of Gamma, each checked against |P(root)| < R2, counted per band."""
        if not cert.certified:
            raise PreconditionError("zero_localization needs a certified lift")
        if cert.lambdas and any(not x.is_zero for row in cert.lambdas for x in row):
            zs = root_service.roots(cert.gamma)
        else:
            zs = np.repeat(root_service.roots(P), cert.params.c)
        coeffs = np.array(P.complex_coeffs(), dtype=complex)
        values = np.abs(np.polynomial.polynomial.polyval(zs, coeffs))
        outside = [complex(z) for z, v in zip(zs, values) if v >= R2]
        if outside:
            raise ConsistencyError(
                f"{len(outside)} root(s) of the lift lie outside |P| < {R2} although the sampled margin certified it; "
                "increase the lemniscate sampling",
                roots=[[z.real, z.imag] for z in outside],
            )
        if bands is None:
            counts = [len(zs)]
        else:
            mu = DiscreteMeasure.uniform(tuple(complex(z) for z in zs))
            counts = _band_counts(bands, mu, len(zs))
        return _revalidated(cert, zero_counts=[int(k) for k in counts], zeros_inside=int(len(zs)))

    # ---- pipeline ----

    def pipeline(self, E: Optional[BandSet], degree_budget: int, denom_bound: int = 1000,
                 R2: Optional[float] = None, jacobi: Optional[PeriodicJacobi] = None,
                 m: Optional[int] = None) -> PipelineReport:
        """
        Integer polynomials of growing degree whose zeros equidistribute on E.

        The generating pair (P, B) comes from a rationalized Jacobi matrix (given,
        or explicit for an interval or a mirror pair) or else from the cosh
        construction on the calibrated inflation of E.
        """
        if degree_budget < 1:
            raise InvalidInputError("degree_budget must be positive")
        P, B, route = self._generator(E, denom_bound, jacobi, m)
        if jacobi is not None:
            E = jacobi_service.spectrum_bands(route["jacobi"]).bands
        capacity = self._capacity(E, route)
        if capacity < 1.0 - CAPACITY_TOL:
            raise ComputationRefusedError(
                f"Capacity {capacity:.6g} < 1: by Fekete's theorem only finitely many integer "
                "polynomials have all zeros near this set",
                capacity=capacity,
            )
        reference = potential_service.equilibrium_measure(E)
        r = P.degree
        stages: List[PipelineStage] = []
        n = 1
        while n * r <= degree_budget:
            logger.info("Pipeline stage n=%s (degree %s)", n, n * r)
            stages.append(self._stage(E, P, B, n, R2, reference))
            n *= 2

        distances = [s.moment_distance for s in stages if s.moment_distance is not None]
        non_increasing = all(d1 <= d0 + MONOTONE_SLACK * (1.0 + d0) for d0, d1 in zip(distances, distances[1:]))
        if not non_increasing:
            logger.warning("Moment distances are not monotone along the pipeline: %s", distances)
        jac = route.get("jacobi")
        return PipelineReport(
            endpoints=list(E.endpoints),
            capacity=capacity,
            jacobi=jac.to_json() if jac is not None else {k: v for k, v in route.items() if k != "jacobi"},
            stages=stages,
            distances_non_increasing=non_increasing,
        )

    def _generator(self, E: Optional[BandSet], denom_bound: int, jacobi: Optional[PeriodicJacobi],
                   m: Optional[int]):
        if jacobi is None:
            if E is None:
                raise InvalidInputError("pipeline needs a band set or a Jacobi matrix")
            try:
                jacobi = jacobi_service.jacobi_for_bands(E)
            except InvalidInputError:
                return self._cosh_generator(E, denom_bound, m)
        Jq = jacobi_service.rationalize(jacobi, denom_bound)
        P, B, _ = jacobi_service.naiman_polynomial(Jq)
        return P, B, {"route": "jacobi", "jacobi": Jq}

    def _cosh_generator(self, E: BandSet, denom_bound: int, m: Optional[int]):
        E_m, data = calibration_service.calibrate(E, m or E.r)
        f, T = calibration_service.cosh_polynomial(E_m, data.N)

        def snap(x: float) -> Fraction:
            return Fraction(round(x * denom_bound), denom_bound)

        coeffs = [snap(x) for x in T.coef[:-1]] + [Fraction(1)]
        P = RationalPoly(coeffs)
        B = GaussianRational.coerce(Fraction(1.0 / (2.0 * f.coef[-1])).limit_denominator(denom_bound))
        return P, B, {"route": "cosh", "N": data.N, "endpoints": list(E_m.endpoints),
                      "P": P.to_json(), "B": str(B)}

    def _capacity(self, E: BandSet, route) -> float:
        if route.get("jacobi") is not None:
            return jacobi_service.jacobi_capacity(route["jacobi"])
        return potential_service.capacity_estimate(E, CapacityScheme.ROBIN_CONSTANT).value

    def _stage(self, E: BandSet, P: RationalPoly, B: GaussianRational, n: int, R2: Optional[float],
               reference: DiscreteMeasure) -> PipelineStage:
        Pn = chebyshev_service.compose_naiman(P, B, n)
        deg = Pn.degree
        cap = math.exp((math.log(2.0) + n * math.log(abs(B))) / deg)
        stage = dict(n=n, degree=deg, P=Pn.to_json(), capacity_estimate=cap)
        if Pn.is_gaussian_integral:
            cert = self.identity_certificate(Pn)
        else:
            radius = R2 or 1.0 + 1.0 / deg
            try:
                c = self.find_lift_exponent(Pn, 1)
            except BudgetExceededError as e:
                logger.warning("Stage n=%s: %s", n, e.detail)
                return PipelineStage(**stage, note=e.detail)
            cert = self.rouche_certify(Pn, self.integer_lift(Pn, 1, c), radius)
            if not cert.certified:
                return PipelineStage(**stage, gamma=cert.gamma.to_json(), c=c, integral=True,
                                     rouche_margin=cert.rouche_margin, note="sampled Rouche margin >= 1")
            cert = self.zero_localization(cert, Pn, radius, E)

        gamma = cert.gamma
        if cert.lambdas:
            mu = potential_service.counting_measure(gamma)
            spread = potential_service.measure_distance(mu, potential_service.counting_measure(Pn), 4)
            logger.info("Stage n=%s: moment gap to P^c %.3e vs 3*margin^(1/deg) = %.3e", n,
                        spread.moment_distance, 3.0 * cert.rouche_margin ** (1.0 / gamma.degree))
        else:
            mu = potential_service.counting_measure(Pn)
        dist = potential_service.measure_distance(mu, reference, 4)
        return PipelineStage(
            **stage,
            gamma=gamma.to_json(),
            c=cert.params.c,
            integral=True,
            rouche_margin=cert.rouche_margin,
            certified=cert.certified,
            moment_distance=dist.moment_distance,
            potential_gap=dist.potential_gap,
            band_counts=_band_counts(E, mu, gamma.degree),
        )


integerize_service = IntegerizeService()
