"""
Exact scalars of Q[i]
"""
import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Tuple

from potentia.exceptions import InvalidInputError


def to_fraction(value: Any) -> Fraction:
    """Exact conversion; floats keep their binary value, strings are parsed as written."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInputError(f"Not a number: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InvalidInputError(f"Not a finite number: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"Cannot parse rational {value!r}: {e}")
    try:
        return Fraction(float(value))
    except (TypeError, ValueError):
        raise InvalidInputError(f"Not a real number: {value!r}")


def _split_complex_literal(text: str) -> Tuple[str, str]:
    """Split "p/q+r/s i" into ("p/q", "+r/s"); a bare "r/s i" has real part 0."""
    body = text[:-1].strip()
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            return body[:pos].strip(), body[pos:].replace(" ", "")
    return "0", body.replace(" ", "")


class GaussianRational:
    """
    Element re + im*i of Q[i] with exact Fraction parts.

    Fractions are always reduced with a positive denominator, so equality and
    hashing are structural. Instances are immutable.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        object.__setattr__(self, "re", to_fraction(re))
        object.__setattr__(self, "im", to_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # ---- construction ----

    @classmethod
    def coerce(cls, value: Any) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value, 0)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse "p/q", "p/q+r/s i" or "r/s i"."""
        text = text.strip()
        if not text:
            raise InvalidInputError("Empty coefficient string")
        if text.endswith("i"):
            re_part, im_part = _split_complex_literal(text)
            if im_part in ("+", "-", ""):
                im_part += "1"
            return cls(re_part, im_part)
        return cls(text, 0)

    # ---- predicates ----

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @property
    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    @property
    def denominator(self) -> int:
        """Least common denominator of both parts."""
        a, b = self.re.denominator, self.im.denominator
        return math.lcm(a, b)

    # ---- arithmetic ----

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def round(self) -> "GaussianRational":
        """Nearest Gaussian integer (componentwise rounding)."""
        return GaussianRational(round(self.re), round(self.im))

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        if self.im == 0 and other.im == 0:
            return GaussianRational(self.re * other.re, 0)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero in Q[i]")
        if other.im == 0:
            return GaussianRational(self.re / other.re, self.im / other.re)
        n = other.norm()
        num = self * other.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)} i"


def _maybe(value: Any):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussianRational(value, 0)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
