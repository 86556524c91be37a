import json
import math
import random
from fractions import Fraction

import pytest

from potentia.exceptions import (
    BudgetExceededError, ComputationRefusedError, ConsistencyError, InvalidInputError, PreconditionError,
)
from potentia.models.compact import BandSet
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.polynomial import RationalPoly
from potentia.models.scalar import GaussianRational
from potentia.services.integerize_service import integerize_service
from potentia.services.jacobi_service import jacobi_service
from tests.helpers import poly


class TestProtectedCoefficients:
    def test_small_example(self):
        coeffs = integerize_service.protected_coefficients(poly(Fraction(1, 3), -1, 1), 1, 3)
        assert coeffs == [(5, GaussianRational.coerce(-3)), (4, GaussianRational.coerce(4))]

    def test_matches_full_power(self):
        P = poly("1/3", "-2/5", "7/2", 1)
        full = P ** 4
        for degree, value in integerize_service.protected_coefficients(P, 2, 4):
            assert value == full.coefficient(degree)

    def test_lift_exponent_search(self):
        assert integerize_service.find_lift_exponent(poly("-1/2", 1)) == 2
        assert integerize_service.find_lift_exponent(poly("-1/3", 1)) == 3
        with pytest.raises(BudgetExceededError):
            integerize_service.find_lift_exponent(poly("-1/7", 1), budget=5)

    def test_schedule_is_admissible(self):
        b, c = integerize_service.factorial_schedule(2, 2, 2)
        assert (b, c) == (4, 24 * 16)
        P = poly("-1/2", "1/2", 1)
        assert all(x.is_gaussian_integer for _, x in integerize_service.protected_coefficients(P, 2, c))


class TestIntegerLift:
    def test_linear_example(self):
        cert = integerize_service.integer_lift(poly("-1/2", 1), 1, 2)
        assert cert.gamma == poly(0, -1, 1)
        assert cert.lambdas == [[GaussianRational.coerce(Fraction(-1, 4))]]
        assert cert.params.m == 2

    def test_random_lifts_are_integral(self):
        rng = random.Random(31)
        checked = 0
        for _ in range(1000):
            if checked == 50:
                break
            K, m, a = rng.randint(1, 3), rng.randint(2, 6), rng.randint(1, 3)
            P = RationalPoly([Fraction(rng.randint(-4 * m, 4 * m), m) for _ in range(K)] + [1])
            try:
                c = integerize_service.find_lift_exponent(P, a, budget=24)
            except BudgetExceededError:
                continue
            cert = integerize_service.integer_lift(P, a, c)
            assert cert.gamma.is_monic and cert.gamma.degree == K * c
            assert all(x.is_gaussian_integer for x in cert.gamma.coeffs)
            diff = cert.gamma - P ** c
            assert diff.is_zero or diff.degree < K * (c - a)
            assert all(abs(complex(x)) <= math.sqrt(2) / 2 + 1e-12 for row in cert.lambdas for x in row)
            checked += 1
        assert checked == 50

    def test_jacobi_example(self):
        J = PeriodicJacobi.from_lists([0, 0], [1, Fraction(5, 2)])
        P, _, _ = jacobi_service.naiman_polynomial(J)
        assert P == poly("-29/4", 0, 1)
        c = integerize_service.find_lift_exponent(P)
        assert c == 4
        cert = integerize_service.integer_lift(P, 1, c)
        assert cert.gamma == poly(2744, 0, -1519, 0, 315, 0, -29, 0, 1)
        assert integerize_service.rouche_certify(P, cert, 1.25).certified

    def test_non_integer_protected_coefficient(self):
        with pytest.raises(PreconditionError):
            integerize_service.integer_lift(poly("-1/3", 1), 1, 2)

    def test_bad_parameters(self):
        with pytest.raises(InvalidInputError):
            integerize_service.integer_lift(poly("-1/2", 1), 2, 2)
        with pytest.raises(InvalidInputError):
            integerize_service.integer_lift(poly(1, 2), 1, 2)
        with pytest.raises(BudgetExceededError):
            integerize_service.integer_lift(poly("-1/2", 1), 1, 1000)


class TestRoucheCertificate:
    @pytest.mark.parametrize("R2, margin", [(2.0, 1 / 16), (1.01, 0.25 / 1.0201)])
    def test_linear_margin(self, R2, margin):
        P = poly("-1/2", 1)
        cert = integerize_service.rouche_certify(P, integerize_service.integer_lift(P, 1, 2), R2, n_samples=256)
        assert cert.rouche_margin == pytest.approx(margin, rel=1e-9)
        assert cert.certified and cert.certified_half
        assert cert.params.R2 == R2

    def test_certificate_dumps_to_json(self):
        P = poly("-29/4", 0, 1)
        cert = integerize_service.rouche_certify(P, integerize_service.integer_lift(P, 1, 4), 1.25)
        dumped = cert.model_dump(mode="json")
        assert dumped["certified"] is True
        assert type(dumped["rouche_margin"]) is float
        assert json.loads(json.dumps(dumped)) == dumped
        located = integerize_service.zero_localization(cert, P, 1.25)
        assert located.model_dump(mode="json")["zeros_inside"] == 8

    def test_radius_must_exceed_one(self):
        P = poly("-1/2", 1)
        cert = integerize_service.integer_lift(P, 1, 2)
        with pytest.raises(InvalidInputError):
            integerize_service.rouche_certify(P, cert, 1.0)


class TestZeroLocalization:
    def test_identity_certificate(self, two_bands):
        P = poly(-5, 0, 1) ** 2 - 8
        cert = integerize_service.identity_certificate(P)
        located = integerize_service.zero_localization(cert, P, 1.5, two_bands)
        assert located.zeros_inside == 4
        assert located.zero_counts == [2, 2]

    def test_identity_needs_integer_input(self):
        with pytest.raises(InvalidInputError):
            integerize_service.identity_certificate(poly("1/2", 1))

    def test_uncertified_lift_rejected(self):
        P = poly("-1/2", 1)
        cert = integerize_service.integer_lift(P, 1, 2)
        with pytest.raises(PreconditionError):
            integerize_service.zero_localization(cert, P, 2.0)

    def test_lift_zeros_stay_in_the_lemniscate(self):
        P = poly("-1/2", 1)
        cert = integerize_service.rouche_certify(P, integerize_service.integer_lift(P, 1, 2), 2.0)
        located = integerize_service.zero_localization(cert, P, 2.0)
        assert located.zeros_inside == 2

    def test_outlier_is_inconsistent(self):
        P = poly("-1/2", 1)
        cert = integerize_service.integer_lift(P, 1, 2).model_copy(update={"certified": True})
        # zeros 0 and 1 sit on |P| = 1/2
        with pytest.raises(ConsistencyError):
            integerize_service.zero_localization(cert, P, 0.4)


class TestPipeline:
    def test_standard_interval(self, interval):
        report = integerize_service.pipeline(interval, 64)
        assert report.capacity == pytest.approx(1.0)
        assert [s.degree for s in report.stages] == [1, 2, 4, 8, 16, 32, 64]
        assert all(s.integral and s.c == 1 for s in report.stages)
        assert report.stages[-1].moment_distance <= 0.05
        assert report.distances_non_increasing

    def test_mirror_pair(self, two_bands):
        report = integerize_service.pipeline(two_bands, 64)
        assert report.capacity == pytest.approx(2 ** 0.5)
        assert report.stages[-1].degree == 64
        for stage in report.stages:
            assert stage.band_counts == [stage.degree // 2, stage.degree // 2]
        late = [s.moment_distance for s in report.stages if s.degree >= 8]
        assert len(late) >= 4
        assert all(y <= x + 1e-9 for x, y in zip(late, late[1:]))

    def test_reruns_are_identical(self, two_bands):
        first = integerize_service.pipeline(two_bands, 32)
        second = integerize_service.pipeline(two_bands, 32)
        assert first.model_dump_json() == second.model_dump_json()

    def test_small_capacity_refused(self):
        with pytest.raises(ComputationRefusedError):
            integerize_service.pipeline(BandSet.interval(-1.0, 1.0), 16)

    def test_degree_budget(self, interval):
        with pytest.raises(InvalidInputError):
            integerize_service.pipeline(interval, 0)
