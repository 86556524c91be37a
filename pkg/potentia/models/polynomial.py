"""
Exact polynomials over Q[i] and Z[i]

Coefficients are stored in ascending degree order. Products clear
denominators first and convolve Gaussian-integer pairs, so powers of
polynomials with large denominators stay cheap.
"""
import math
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple, Union

import numpy as np

from potentia.exceptions import InvalidInputError
from potentia.models.scalar import GaussianRational, ONE, ZERO

Number = Union[int, Fraction, GaussianRational]
IntPair = Tuple[int, int]


def _is_exact(z: Any) -> bool:
    return isinstance(z, (int, Fraction, GaussianRational)) and not isinstance(z, bool)


def _scaled_pairs(coeffs: Sequence[GaussianRational]) -> Tuple[int, List[IntPair]]:
    """Common denominator d and the integer pairs of d*coeffs."""
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.re.denominator, c.im.denominator)
    pairs = [
        ((c.re * den).numerator, (c.im * den).numerator)
        for c in coeffs
    ]
    return den, pairs


def _convolve(xs: List[IntPair], ys: List[IntPair]) -> List[IntPair]:
    if not xs or not ys:
        return []
    out_re = [0] * (len(xs) + len(ys) - 1)
    out_im = [0] * (len(xs) + len(ys) - 1)
    real = all(b == 0 for _, b in xs) and all(d == 0 for _, d in ys)
    for i, (a, b) in enumerate(xs):
        if a == 0 and b == 0:
            continue
        for j, (c, d) in enumerate(ys):
            if real:
                out_re[i + j] += a * c
            else:
                out_re[i + j] += a * c - b * d
                out_im[i + j] += a * d + b * c
    return list(zip(out_re, out_im))


def _from_pairs(pairs: List[IntPair], den: int) -> List[GaussianRational]:
    return [GaussianRational(Fraction(a, den), Fraction(b, den)) for a, b in pairs]


class RationalPoly:
    """
    Polynomial with Gaussian-rational coefficients, immutable.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        items = [GaussianRational.coerce(c) for c in coeffs]
        while items and items[-1].is_zero:
            items.pop()
        object.__setattr__(self, "coeffs", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # ---- constructors ----

    @classmethod
    def constant(cls, c: Any) -> "RationalPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Any = 1) -> "RationalPoly":
        return cls([0] * k + [c])

    @classmethod
    def identity(cls) -> "RationalPoly":
        return cls([0, 1])

    @classmethod
    def from_json(cls, items: Sequence[Any]) -> "RationalPoly":
        if not isinstance(items, (list, tuple)) or not items:
            raise InvalidInputError("Polynomial JSON must be a non-empty array of coefficients")
        return cls(GaussianRational.coerce(c) for c in items)

    # ---- properties ----

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.coeffs)

    @property
    def is_gaussian_integral(self) -> bool:
        return all(c.is_gaussian_integer for c in self.coeffs)

    @property
    def denominator(self) -> int:
        den = 1
        for c in self.coeffs:
            den = math.lcm(den, c.re.denominator, c.im.denominator)
        return den

    def coefficient(self, k: int) -> GaussianRational:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def scale(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    # ---- ring operations ----

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coefficient(k) + other.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, RationalPoly):
            if self.is_zero or other.is_zero:
                return RationalPoly()
            da, xs = _scaled_pairs(self.coeffs)
            db, ys = _scaled_pairs(other.coeffs)
            return RationalPoly(_from_pairs(_convolve(xs, ys), da * db))
        if _is_exact(other):
            c = GaussianRational.coerce(other)
            return RationalPoly(c * a for a in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_exact(other):
            c = GaussianRational.coerce(other)
            return RationalPoly(a / c for a in self.coeffs)
        return NotImplemented

    def __pow__(self, k: int) -> "RationalPoly":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        den, pairs = _scaled_pairs(self.coeffs) if self.coeffs else (1, [])
        result: List[IntPair] = [(1, 0)]
        base = pairs
        e = k
        while e:
            if e & 1:
                result = _convolve(result, base)
            e >>= 1
            if e:
                base = _convolve(base, base)
        return RationalPoly(_from_pairs(result, den ** k))

    def divmod(self, other: "RationalPoly") -> Tuple["RationalPoly", "RationalPoly"]:
        """Exact long division over Q[i]."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.leading
        quot = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        for shift in range(len(quot) - 1, -1, -1):
            factor = rem[shift + other.degree] / lead
            quot[shift] = factor
            if factor.is_zero:
                continue
            for k, c in enumerate(other.coeffs):
                rem[shift + k] = rem[shift + k] - factor * c
        return RationalPoly(quot), RationalPoly(rem[: other.degree] if other.degree > 0 else [])

    def derivative(self) -> "RationalPoly":
        return RationalPoly(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """self(inner(z))"""
        result = RationalPoly()
        for c in reversed(self.coeffs):
            result = result * inner + RationalPoly.constant(c)
        return result

    def monic(self) -> "RationalPoly":
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial has no monic normalisation")
        return self / self.leading

    def conjugate(self) -> "RationalPoly":
        return RationalPoly(c.conjugate() for c in self.coeffs)

    # ---- evaluation ----

    def __call__(self, z: Any):
        """Horner evaluation; exact for exact arguments, floating otherwise."""
        if _is_exact(z):
            z = GaussianRational.coerce(z)
            acc = ZERO
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        if type(z).__module__.startswith("mpmath"):
            from mpmath import mp
            acc = mp.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mp.mpc(mp.mpf(c.re.numerator) / c.re.denominator,
                                       mp.mpf(c.im.numerator) / c.im.denominator)
            return acc
        acc = 0j
        for c in reversed(self.complex_coeffs()):
            acc = acc * z + c
        return acc

    def complex_coeffs(self) -> List[complex]:
        return [complex(c) for c in self.coeffs]

    def to_numpy(self) -> np.polynomial.Polynomial:
        values = np.array(self.complex_coeffs() or [0j], dtype=complex)
        if self.is_real:
            values = values.real
        return np.polynomial.Polynomial(values)

    # ---- comparison / display ----

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_json(self) -> List[str]:
        return [str(c) for c in self.coeffs] or ["0"]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            text = str(c)
            if not c.is_real:
                text = f"({text})"
            if k == 0:
                terms.append(text)
            else:
                power = "z" if k == 1 else f"z^{k}"
                if c == ONE:
                    terms.append(power)
                elif c == -ONE:
                    terms.append(f"-{power}")
                else:
                    terms.append(f"{text}*{power}")
        return " + ".join(terms).replace("+ -", "- ")


class GaussianIntPoly(RationalPoly):
    """Polynomial whose coefficients all lie in Z[i]."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable[Any] = ()):
        super().__init__(coeffs)
        for k, c in enumerate(self.coeffs):
            if not c.is_gaussian_integer:
                raise InvalidInputError(f"Coefficient of z^{k} is not a Gaussian integer: {c}")

    @classmethod
    def from_poly(cls, p: RationalPoly) -> "GaussianIntPoly":
        return cls(p.coeffs)

    def integer_pairs(self) -> List[IntPair]:
        return [(c.re.numerator, c.im.numerator) for c in self.coeffs]


def _as_poly(value: Any):
    if isinstance(value, RationalPoly):
        return value
    if _is_exact(value):
        return RationalPoly.constant(value)
    return None
