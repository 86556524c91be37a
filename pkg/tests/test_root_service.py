import math

import numpy as np
import pytest

from potentia.exceptions import InvalidInputError
from potentia.services.root_service import absolute_residual, backward_error, root_service
from tests.helpers import poly


def _sorted_real(values):
    return sorted(float(v.real) for v in values)


class TestRoots:
    def test_simple_quadratics(self):
        assert _sorted_real(root_service.roots(poly(-1, 0, 1))) == pytest.approx([-1.0, 1.0])
        assert _sorted_real(root_service.roots(poly(0, -1, 1))) == pytest.approx([0.0, 1.0], abs=1e-14)

    def test_cubic(self):
        roots = root_service.roots(poly(0, -3, 0, 1))
        assert _sorted_real(roots) == pytest.approx([-math.sqrt(3), 0.0, math.sqrt(3)], abs=1e-12)
        assert np.max(np.abs(roots.imag)) < 1e-12

    def test_float_coefficients(self):
        roots = root_service.roots(np.array([2.0, -3.0, 1.0]))
        assert _sorted_real(roots) == pytest.approx([1.0, 2.0])

    def test_zero_roots_split_off(self):
        roots = root_service.roots(np.array([0.0, 0.0, -4.0, 1.0]))
        assert _sorted_real(roots) == pytest.approx([0.0, 0.0, 4.0])

    def test_residual_contract_on_large_composition(self):
        # (z^2-5)^2-8 composed with itself: degree 16, large coefficients
        inner = poly(-5, 0, 1) ** 2 - 8
        p = inner.compose(inner)
        roots = root_service.roots(p)
        assert len(roots) == 16
        coeffs = np.array(p.complex_coeffs())
        assert np.all(backward_error(coeffs, roots) <= 1e-10)

    def test_absolute_residual_inside_the_unit_disk(self):
        p = poly("-1/4", 0, 1)
        roots = root_service.roots(p)
        coeffs = np.array(p.complex_coeffs())
        assert absolute_residual(coeffs, roots) <= 1e-12
        assert absolute_residual(coeffs, np.array([0.0])) == pytest.approx(0.25)

    def test_reexpansion_reproduces_coefficients(self):
        p = poly(6, -5, -2, 1)
        roots = root_service.roots(p)
        rebuilt = np.polynomial.polynomial.polyfromroots(roots)
        assert np.allclose(rebuilt, np.array(p.complex_coeffs()), atol=1e-10 * 3 * 6)

    def test_degree_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            root_service.roots(poly(3))
        with pytest.raises(InvalidInputError):
            root_service.roots(np.array([1.0]))
