import math
import random
from fractions import Fraction

import numpy as np
import pytest

from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.jacobi import PeriodicJacobi
from potentia.services.core_service import core_service
from potentia.services.jacobi_service import jacobi_service
from tests.helpers import poly


class TestNaimanPolynomial:
    @pytest.mark.parametrize("a, b, expected, modulus", [
        ([0, 0], [1, 1], poly(-2, 0, 1), 1),
        ([0, 0], [1, 2], poly(-5, 0, 1), 2),
        ([3], [2], poly(-3, 1), 2),
    ])
    def test_closed_forms(self, a, b, expected, modulus):
        P, B, P_tilde = jacobi_service.naiman_polynomial(PeriodicJacobi.from_lists(a, b))
        assert P == expected
        assert B == modulus
        assert P_tilde == expected / modulus

    def test_matches_transfer_trace_on_random_matrices(self):
        rng = random.Random(2024)
        for _ in range(20):
            r = rng.randint(2, 6)
            a = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(r)]
            b = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)) for _ in range(r)]
            J = PeriodicJacobi.from_lists(a, b)
            P, B, P_tilde = jacobi_service.naiman_polynomial(J, check_seed=rng.randint(0, 1000))
            assert P.is_monic and P.degree == r
            z = Fraction(rng.randint(-50, 50), rng.randint(1, 13))
            assert P_tilde(z) == jacobi_service.transfer_trace(J, z)


class TestSpectrum:
    def test_two_band_spectrum(self, jacobi_12):
        spectrum = jacobi_service.spectrum_bands(jacobi_12)
        assert spectrum.bands.endpoints == pytest.approx((-3.0, -1.0, 1.0, 3.0), abs=1e-10)
        assert jacobi_service.band_polynomial_error(jacobi_12, spectrum) <= 1e-10
        for zero, (lo, hi) in zip(spectrum.band_zeros, spectrum.bands.bands):
            assert lo <= zero <= hi

    def test_closed_gap_is_merged(self, jacobi_11):
        spectrum = jacobi_service.spectrum_bands(jacobi_11)
        assert spectrum.bands.endpoints == pytest.approx((-2.0, 2.0), abs=1e-10)
        assert spectrum.bands.multiplicity == (2,)
        assert spectrum.bands.touching == pytest.approx((0.0,), abs=1e-10)
        assert spectrum.bands.has_closed_gaps

    def test_shift_translates_edges(self, jacobi_12):
        base = jacobi_service.spectrum_bands(jacobi_12).band_edges
        shifted = jacobi_service.spectrum_bands(jacobi_12.shifted(Fraction(3, 2))).band_edges
        assert np.allclose(np.array(shifted) - np.array(base), 1.5, atol=1e-10)

    def test_discriminant_bounded_on_bands(self, jacobi_12):
        _, _, P_tilde = jacobi_service.naiman_polynomial(jacobi_12)
        spectrum = jacobi_service.spectrum_bands(jacobi_12)
        for lo, hi in spectrum.bands.bands:
            for x in np.linspace(lo, hi, 100):
                assert abs(P_tilde(float(x))) <= 2.0 + 1e-9
        for lo, hi in spectrum.bands.gaps:
            assert abs(P_tilde((lo + hi) / 2.0)) > 2.0

    def test_band_count_never_exceeds_period(self):
        J = PeriodicJacobi.from_lists([1, -2, 0], [1, Fraction(1, 2), 3])
        spectrum = jacobi_service.spectrum_bands(J)
        assert spectrum.bands.r <= 3
        assert len(spectrum.band_edges) == 6

    def test_complex_matrix_rejected(self):
        J = PeriodicJacobi.from_lists(["1 i", 0], [1, 1])
        with pytest.raises(InvalidInputError):
            jacobi_service.spectrum_bands(J)


class TestCapacity:
    @pytest.mark.parametrize("b, expected", [([1, 2], math.sqrt(2)), ([1, 1], 1.0), ([2, 2, 2], 2.0)])
    def test_modulus_formula(self, b, expected):
        J = PeriodicJacobi.from_lists([0] * len(b), b)
        assert jacobi_service.jacobi_capacity(J) == pytest.approx(expected, rel=1e-14)


class TestRationalize:
    def test_rational_input_unchanged(self, jacobi_12):
        assert jacobi_service.rationalize(jacobi_12, 10) == jacobi_12

    def test_irrational_entry_is_rounded(self):
        J = PeriodicJacobi.from_lists([0, 0], [1, math.sqrt(2)])
        Jq = jacobi_service.rationalize(J, 100)
        assert Jq.offdiag[1] == Fraction(141, 100)
        err = jacobi_service.rationalization_error(J, Jq)
        assert err["entry_error"] <= 0.01
        assert err["spectral_bound"] == pytest.approx(3 * err["entry_error"])

    def test_spectral_shift_within_bound(self):
        J = PeriodicJacobi.from_lists([0, 0], [1, math.sqrt(2)])
        Jq = jacobi_service.rationalize(J, 100)
        exact = jacobi_service.spectrum_bands(J).bands
        rounded = jacobi_service.spectrum_bands(Jq).bands
        bound = jacobi_service.rationalization_error(J, Jq)["spectral_bound"]
        assert core_service.set_distance(exact, rounded) <= bound

    def test_zero_after_rounding(self):
        J = PeriodicJacobi.from_lists([0, 0], [1, Fraction(1, 1000)])
        with pytest.raises(InvalidInputError):
            jacobi_service.rationalize(J, 10)

    def test_bad_bound(self, jacobi_12):
        with pytest.raises(InvalidInputError):
            jacobi_service.rationalize(jacobi_12, 0)


class TestJacobiForBands:
    def test_interval(self):
        J = jacobi_service.jacobi_for_bands(BandSet.interval(-2.0, 2.0))
        spectrum = jacobi_service.spectrum_bands(J)
        assert spectrum.bands.endpoints == pytest.approx((-2.0, 2.0), abs=1e-10)

    def test_mirror_pair(self, two_bands):
        J = jacobi_service.jacobi_for_bands(two_bands)
        assert jacobi_service.jacobi_capacity(J) == pytest.approx(math.sqrt(2))
        spectrum = jacobi_service.spectrum_bands(J)
        assert spectrum.bands.endpoints == pytest.approx(two_bands.endpoints, abs=1e-10)

    def test_unsupported_shape(self):
        with pytest.raises(InvalidInputError):
            jacobi_service.jacobi_for_bands(BandSet((-2.0, 0.0, 1.0, 2.0)))
