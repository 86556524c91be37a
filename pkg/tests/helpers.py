from fractions import Fraction

from potentia.models.polynomial import RationalPoly


def poly(*coeffs) -> RationalPoly:
    """Ascending coefficients; strings parse as exact rationals."""
    return RationalPoly([Fraction(c) if isinstance(c, str) else c for c in coeffs])
