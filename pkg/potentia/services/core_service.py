"""
Core Service

Exact polynomial operations and the delta-distance between compact sets.
"""
import logging
from typing import Any, List, Optional, Tuple, Union

from potentia.exceptions import BudgetExceededError, InvalidInputError
from potentia.models.compact import BandSet, PointCloud
from potentia.models.polynomial import RationalPoly

logger = logging.getLogger(__name__)

CompactSet = Union[BandSet, PointCloud]

# p = 1 (mod 4), so -1 is a square and Q[i] reduces into GF(p)
MODULUS = 1_000_000_009

# coefficient bit budget for exact powers
POWER_BIT_BUDGET = 50_000_000


def _sqrt_minus_one(p: int) -> int:
    g = 2
    while pow(g, (p - 1) // 2, p) != p - 1:
        g += 1
    return pow(g, (p - 1) // 4, p)


_I_MOD = _sqrt_minus_one(MODULUS)


def _reduce_mod(poly: RationalPoly, p: int = MODULUS) -> Optional[List[int]]:
    """Image of poly in GF(p)[z], or None when a denominator vanishes mod p."""
    out = []
    for c in poly.coeffs:
        if c.re.denominator % p == 0 or c.im.denominator % p == 0:
            return None
        re = c.re.numerator * pow(c.re.denominator, -1, p)
        im = c.im.numerator * pow(c.im.denominator, -1, p)
        out.append((re + _I_MOD * im) % p)
    return out


def _gf_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_rem(a: List[int], b: List[int], p: int) -> List[int]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        factor = a[-1] * inv % p
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[shift + k] = (a[shift + k] - factor * c) % p
        _gf_trim(a)
    return a


def _gf_gcd_degree(a: List[int], b: List[int], p: int) -> int:
    a, b = _gf_trim(list(a)), _gf_trim(list(b))
    while b:
        a, b = b, _gf_rem(a, b, p)
    return len(a) - 1


class CoreService:
    """Exact arithmetic helpers and set distances."""

    # ---- polynomials ----

    def poly_eval(self, p: RationalPoly, z: Any):
        """Horner; exact when z is exact."""
        return p(z)

    def poly_pow_exact(self, p: RationalPoly, k: int) -> RationalPoly:
        if not isinstance(k, int) or k < 1:
            raise InvalidInputError(f"Exponent must be a positive integer, got {k!r}")
        if not p.is_zero:
            bits = max(abs(c.re.numerator).bit_length() + c.re.denominator.bit_length()
                       + abs(c.im.numerator).bit_length() + c.im.denominator.bit_length()
                       for c in p.coeffs)
            estimate = k * (bits + p.degree.bit_length() + 1) * (k * p.degree + 1)
            if estimate > POWER_BIT_BUDGET:
                raise BudgetExceededError(
                    f"p^{k} would need about {estimate} coefficient bits (budget {POWER_BIT_BUDGET})",
                    degree=p.degree, exponent=k,
                )
        return p ** k

    def gcd(self, a: RationalPoly, b: RationalPoly) -> RationalPoly:
        """Monic gcd over Q[i] by the Euclidean algorithm."""
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a.monic()

    def is_squarefree_mod(self, p: RationalPoly) -> bool:
        """
        Cheap sufficient test: gcd(p, p') = 1 in GF(MODULUS)[z] with the
        leading coefficient surviving the reduction. False means "unknown".
        """
        f = _reduce_mod(p)
        df = _reduce_mod(p.derivative())
        if f is None or df is None or f[-1] % MODULUS == 0:
            return False
        if not _gf_trim(list(df)):
            return p.degree <= 0
        return _gf_gcd_degree(f, df, MODULUS) == 0

    def squarefree_decomposition(self, p: RationalPoly) -> List[Tuple[RationalPoly, int]]:
        """Yun's algorithm: monic squarefree factors with multiplicities, p = lead * prod f_i^i."""
        if p.degree < 1:
            return []
        f = p.monic()
        if self.is_squarefree_mod(f):
            return [(f, 1)]
        logger.debug("Modular squarefree test inconclusive for degree %s; running Yun", f.degree)
        df = f.derivative()
        b = self.gcd(f, df)
        if b.degree == 0:
            return [(f, 1)]
        c = f.divmod(b)[0]
        d = df.divmod(b)[0] - c.derivative()
        factors = []
        i = 1
        while c.degree > 0:
            a = self.gcd(c, d)
            if a.degree > 0:
                factors.append((a, i))
            c = c.divmod(a)[0]
            d = d.divmod(a)[0] - c.derivative()
            i += 1
        return factors

    # ---- set distance ----

    def set_distance(self, e1: Optional[CompactSet], e2: Optional[CompactSet]) -> float:
        """Smallest r such that each set lies in the closed r-inflation of the other."""
        if e1 is None or e2 is None:
            raise InvalidInputError("set_distance needs two nonempty sets")
        return max(self.directed_distance(e1, e2), self.directed_distance(e2, e1))

    def directed_distance(self, src: CompactSet, dst: CompactSet) -> float:
        """sup over x in src of dist(x, dst)."""
        candidates = self._critical_points(src, dst)
        return max(dst.distance_to(z) for z in candidates)

    @staticmethod
    def _critical_points(src: CompactSet, dst: CompactSet) -> List[complex]:
        if isinstance(src, PointCloud):
            return list(src.points)
        # dist(., dst) restricted to a band is maximal at band ends or where
        # two nearest points of dst are equidistant
        pts: List[float] = list(src.endpoints)
        if isinstance(dst, BandSet):
            seams = [(lo + hi) / 2.0 for lo, hi in dst.gaps]
        else:
            arr = dst.array()
            seams = []
            n = len(arr)
            for i in range(n):
                for j in range(i + 1, n):
                    dx = arr[i].real - arr[j].real
                    if dx == 0:
                        continue
                    x = (abs(arr[i]) ** 2 - abs(arr[j]) ** 2) / (2.0 * dx)
                    seams.append(float(x))
            seams.extend(float(z.real) for z in arr)
        for x in seams:
            if src.band_index(x) >= 0:
                pts.append(x)
        return [complex(x) for x in pts]


core_service = CoreService()
