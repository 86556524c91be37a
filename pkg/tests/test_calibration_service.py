import cmath
import math
import random

import numpy as np
import pytest

from potentia.exceptions import ConsistencyError, InvalidInputError, PreconditionError
from potentia.models.compact import BandSet
from potentia.services.calibration_service import calibration_service
from potentia.services.jacobi_service import jacobi_service


def _joukowski_green(z: complex) -> float:
    w = z / 2 + cmath.sqrt(z * z / 4 - 1)
    return math.log(max(abs(w), 1 / abs(w)))


def _random_band_set(rng: random.Random) -> BandSet:
    r = rng.randint(2, 3)
    ends, x = [], rng.uniform(-4.0, -2.0)
    for _ in range(r):
        ends.append(x)
        x += rng.uniform(0.2, 2.0)
        ends.append(x)
        x += rng.uniform(0.2, 2.0)
    return BandSet(tuple(ends))


class TestSolveR:
    def test_single_band(self, interval):
        data = calibration_service.solve_R(interval)
        assert data.R_coeffs == [1.0]
        assert data.lambdas == []

    @pytest.mark.parametrize("ends", [(-3.0, -1.0, 1.0, 3.0), (-2.0, -1.0, 1.0, 2.0)])
    def test_symmetric_pairs_have_root_at_zero(self, ends):
        data = calibration_service.solve_R(BandSet(ends))
        assert data.lambdas == [pytest.approx(0.0, abs=1e-9)]
        assert data.R_coeffs[-1] == 1.0

    def test_one_root_per_gap(self):
        rng = random.Random(5)
        for _ in range(200):
            E = _random_band_set(rng)
            data = calibration_service.solve_R(E)
            assert len(data.lambdas) == E.r - 1
            for lam, (lo, hi) in zip(data.lambdas, E.gaps):
                assert lo < lam < hi

    def test_closed_gap_rejected(self, jacobi_11):
        merged = jacobi_service.spectrum_bands(jacobi_11).bands
        with pytest.raises(PreconditionError):
            calibration_service.solve_R(merged)


class TestHarmonicMeasures:
    def test_single_band(self, interval):
        assert calibration_service.harmonic_measures(interval).omega == [pytest.approx(1.0, abs=1e-12)]

    def test_symmetric_pair(self, two_bands):
        omega = calibration_service.harmonic_measures(two_bands).omega
        assert omega == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_jacobi_spectrum(self, jacobi_12):
        bands = jacobi_service.spectrum_bands(jacobi_12).bands
        assert calibration_service.harmonic_measures(bands).omega == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_masses_sum_to_one(self):
        rng = random.Random(9)
        for _ in range(200):
            omega = calibration_service.harmonic_measures(_random_band_set(rng)).omega
            assert math.fsum(omega) == pytest.approx(1.0, abs=1e-10)
            assert all(w > 0 for w in omega)

    def test_node_doubling_is_stable(self):
        E = BandSet((-2.0, -0.5, 0.3, 1.0, 1.7, 3.0))
        coarse = calibration_service.harmonic_measures(E, nodes=64).omega
        fine = calibration_service.harmonic_measures(E, nodes=128).omega
        assert np.allclose(coarse, fine, atol=1e-10)


class TestGreen:
    def test_interval_robin_is_zero(self, interval):
        assert calibration_service.robin_constant(interval) == pytest.approx(0.0, abs=1e-8)

    def test_two_band_robin(self, two_bands):
        assert calibration_service.robin_constant(two_bands) == pytest.approx(-0.5 * math.log(2.0), abs=1e-6)

    def test_vanishes_on_the_bands(self, two_bands):
        for e in two_bands.endpoints:
            assert calibration_service.green_eval(two_bands, e).g == pytest.approx(0.0, abs=1e-8)
        assert calibration_service.complex_green(two_bands, 3.0).real == pytest.approx(0.0, abs=1e-8)

    @pytest.mark.parametrize("z", [3.0, -2.5, 1 + 1j, 0.5j, -1.5 - 0.2j])
    def test_interval_closed_form(self, interval, z):
        assert calibration_service.green_eval(interval, z).g == pytest.approx(_joukowski_green(complex(z)), abs=1e-7)

    def test_positive_off_the_set(self, two_bands):
        assert calibration_service.green_eval(two_bands, 0.0).g > 0
        assert calibration_service.green_eval(two_bands, 2 + 1j).g > 0

    @pytest.mark.parametrize("name", ["jacobi_12", "jacobi_3"])
    def test_robin_matches_jacobi_capacity(self, request, name):
        J = request.getfixturevalue(name)
        bands = jacobi_service.spectrum_bands(J).bands
        expected = -math.log(jacobi_service.jacobi_capacity(J))
        assert calibration_service.robin_constant(bands) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("name", ["jacobi_12", "jacobi_3"])
    def test_cosh_of_green_is_the_discriminant(self, request, name):
        J = request.getfixturevalue(name)
        _, _, P_tilde = jacobi_service.naiman_polynomial(J)
        bands = jacobi_service.spectrum_bands(J).bands
        for k in range(50):
            z = 5.0 * cmath.exp(2j * math.pi * (k + 0.25) / 50)
            lhs = 2 * cmath.cosh(J.r * calibration_service.complex_green(bands, z))
            rhs = complex(P_tilde(z))
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))

    def test_negative_quadrature_is_inconsistent(self, monkeypatch, two_bands):
        class Stub:
            def __init__(self, value):
                self.value = value

            def robin(self):
                return 0.0

            def complex_integral(self, z):
                return complex(self.value)

        monkeypatch.setattr(calibration_service, "_prepare", lambda E, nodes=None: Stub(-1e-12))
        assert calibration_service.green_eval(two_bands, 5.0).g == 0.0
        monkeypatch.setattr(calibration_service, "_prepare", lambda E, nodes=None: Stub(-1e-3))
        with pytest.raises(ConsistencyError):
            calibration_service.green_eval(two_bands, 5.0)

    def test_equilibrium_density(self, interval):
        assert calibration_service.equilibrium_density(interval, 0.0) == pytest.approx(1 / (2 * math.pi))
        assert calibration_service.equilibrium_density(interval, 3.0) == 0.0


class TestCalibrate:
    @pytest.mark.parametrize("m", [1, 3, 8])
    def test_single_band_unchanged(self, interval, m):
        E_m, data = calibration_service.calibrate(interval, m)
        assert E_m == interval
        assert data.n_k == [m]

    def test_symmetric_pair_already_calibrated(self, two_bands):
        E_m, data = calibration_service.calibrate(two_bands, 4)
        assert E_m == two_bands
        assert data.n_k == [2, 2]
        assert data.max_inflation == 0.0

    def test_inflation_reaches_rational_measures(self):
        E = BandSet((-2.0, 0.0, 1.0, 2.0))
        E_m, data = calibration_service.calibrate(E, 4)
        assert sum(data.n_k) == 4
        assert data.N == 4
        for w, k in zip(data.omega, data.n_k):
            assert w == pytest.approx(k / 4, abs=1e-8)
        for (lo, hi), (lo_m, hi_m) in zip(E.bands, E_m.bands):
            assert lo_m <= lo + 1e-12 and hi <= hi_m + 1e-12
        assert data.max_inflation <= 0.5 + 1e-6
        recheck = calibration_service.harmonic_measures(E_m).omega
        assert recheck == pytest.approx(data.omega, abs=1e-10)

    def test_m_below_band_count(self, two_bands):
        with pytest.raises(InvalidInputError):
            calibration_service.calibrate(two_bands, 1)


class TestCoshPolynomial:
    def test_interval_degree_one(self, interval):
        f, T = calibration_service.cosh_polynomial(interval, 1)
        assert np.allclose(f.coef, [0.0, 0.5], atol=1e-8)
        assert np.allclose(T.coef, [0.0, 1.0], atol=1e-8)

    def test_two_band_degree_two(self, two_bands):
        f, T = calibration_service.cosh_polynomial(two_bands, 2)
        assert np.allclose(f.coef, [-1.25, 0.0, 0.25], atol=1e-8)
        assert np.allclose(T.coef, [-5.0, 0.0, 1.0], atol=1e-8)

    def test_two_band_degree_four(self, two_bands):
        _, T = calibration_service.cosh_polynomial(two_bands, 4)
        assert np.allclose(T.coef, [17.0, 0.0, -10.0, 0.0, 1.0], atol=1e-6)

    def test_uncalibrated_set(self):
        with pytest.raises(PreconditionError):
            calibration_service.cosh_polynomial(BandSet((-2.0, 0.0, 1.0, 2.0)), 4)
