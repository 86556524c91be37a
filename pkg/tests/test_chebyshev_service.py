import math

import numpy as np
import pytest

from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.polynomial import RationalPoly
from potentia.services.chebyshev_service import GRID_PER_DEGREE, chebyshev_service
from tests.helpers import poly


def _grid(p) -> int:
    return GRID_PER_DEGREE * p.degree + 1


class TestClosedForm:
    def test_kernel(self):
        assert chebyshev_service.chebyshev_kernel(0) == RationalPoly.constant(1)
        assert chebyshev_service.chebyshev_kernel(2) == poly(-2, 0, 1)
        assert chebyshev_service.chebyshev_kernel(3) == poly(0, -3, 0, 1)

    def test_interval_examples(self):
        assert chebyshev_service.monic_chebyshev_interval(-2, 2, 2) == poly(-2, 0, 1)
        assert chebyshev_service.monic_chebyshev_interval(-2, 2, 3) == poly(0, -3, 0, 1)
        assert chebyshev_service.monic_chebyshev_interval(-1, 1, 1) == poly(0, 1)

    def test_integer_on_the_standard_interval(self):
        for n in range(1, 13):
            p = chebyshev_service.monic_chebyshev_interval(-2, 2, n)
            assert p.is_monic and p.is_gaussian_integral and p.degree == n

    @pytest.mark.parametrize("a, b, n", [(-1, 1, 1), (0, 3, 5), (-2, 7, 4), (1, 3, 6)])
    def test_sup_norm(self, a, b, n):
        p = chebyshev_service.monic_chebyshev_interval(a, b, n)
        report = chebyshev_service.equioscillation_check(p, BandSet.interval(a, b), _grid(p))
        assert report.norm == pytest.approx(2 * ((b - a) / 4) ** n, rel=1e-10)
        assert report.alternation_count >= n + 1

    def test_bad_arguments(self):
        with pytest.raises(InvalidInputError):
            chebyshev_service.monic_chebyshev_interval(1, 1, 2)
        with pytest.raises(InvalidInputError):
            chebyshev_service.monic_chebyshev_interval(0, 1, 0)


class TestComposition:
    def test_two_band_examples(self, jacobi_12):
        assert chebyshev_service.chebyshev_compose(jacobi_12, 1) == poly(-5, 0, 1)
        assert chebyshev_service.chebyshev_compose(jacobi_12, 2) == poly(-5, 0, 1) ** 2 - 8

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_unit_modulus_matches_interval(self, jacobi_11, k):
        assert chebyshev_service.chebyshev_compose(jacobi_11, k) == \
            chebyshev_service.monic_chebyshev_interval(-2, 2, 2 * k)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_norm_and_alternations(self, jacobi_12, two_bands, n):
        p = chebyshev_service.chebyshev_compose(jacobi_12, n)
        report = chebyshev_service.equioscillation_check(p, two_bands, _grid(p))
        assert report.norm == pytest.approx(2 * 2 ** n, rel=1e-8)
        assert report.alternation_count >= 2 * n + 1

    def test_norm_ratio_bounds(self, jacobi_12):
        for n in (1, 3, 6):
            ratio = chebyshev_service.chebyshev_norm_ratio(jacobi_12, n)
            assert 1.0 - 1e-9 <= ratio <= 2 ** (1 / (2 * n)) + 1e-9

    def test_zero_gaps_shrink(self, jacobi_12, two_bands):
        def widest(n):
            p = chebyshev_service.chebyshev_compose(jacobi_12, n)
            return max(chebyshev_service.equioscillation_check(p, two_bands, _grid(p)).band_zero_gaps)

        assert widest(32) / widest(8) <= 0.35


class TestEquioscillation:
    def test_classical_quadratic(self, interval):
        report = chebyshev_service.equioscillation_check(poly(-2, 0, 1), interval, 21)
        assert report.norm == pytest.approx(2.0)
        assert report.alternation_count == 3
        assert report.alternation_points == pytest.approx([-2.0, 0.0, 2.0], abs=1e-6)
        assert report.alternation_signs == [1, -1, 1]

    def test_two_band_quartic(self, two_bands):
        p = poly(-5, 0, 1) ** 2 - 8
        report = chebyshev_service.equioscillation_check(p, two_bands, 41)
        assert report.norm == pytest.approx(8.0)
        expected = [-3.0, -math.sqrt(5), -1.0, 1.0, math.sqrt(5), 3.0]
        for x in expected:
            assert min(abs(x - y) for y in report.alternation_points) <= 1e-6

    def test_zeros_split_evenly_over_the_bands(self, jacobi_12, two_bands):
        p = chebyshev_service.chebyshev_compose(jacobi_12, 4)
        report = chebyshev_service.equioscillation_check(p, two_bands, _grid(p))
        # four zeros per band, three gaps each
        assert len(report.zero_gaps) == p.degree - two_bands.r
        assert len(report.band_zero_gaps) == 2

    def test_grid_too_coarse(self, interval):
        with pytest.raises(InvalidInputError):
            chebyshev_service.equioscillation_check(poly(0, -3, 0, 1), interval, 29)

    def test_complex_polynomial_rejected(self, interval):
        with pytest.raises(InvalidInputError):
            chebyshev_service.equioscillation_check(RationalPoly(["1 i", 0, 1]), interval, 21)


class TestRemez:
    def test_interval_cubic(self, interval):
        p = chebyshev_service.remez_union(interval, 3)
        assert np.allclose(p.coef, [0.0, -3.0, 0.0, 1.0], atol=1e-8)

    def test_two_band_quadratic(self, two_bands):
        p = chebyshev_service.remez_union(two_bands, 2)
        assert np.allclose(p.coef, [-5.0, 0.0, 1.0], atol=1e-8)

    def test_two_band_quartic_matches_composition(self, jacobi_12, two_bands):
        p = chebyshev_service.remez_union(two_bands, 4)
        composed = chebyshev_service.chebyshev_compose(jacobi_12, 2).to_numpy()
        assert np.allclose(p.coef, composed.coef, atol=1e-6)

    def test_shifted_interval(self):
        p = chebyshev_service.remez_union(BandSet.interval(0.0, 3.0), 4)
        exact = chebyshev_service.monic_chebyshev_interval(0, 3, 4).to_numpy()
        assert np.allclose(p.coef, exact.coef, atol=1e-8)

    def test_degree_must_be_positive(self, interval):
        with pytest.raises(InvalidInputError):
            chebyshev_service.remez_union(interval, 0)
