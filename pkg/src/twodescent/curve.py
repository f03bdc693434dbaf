"""The curves E_p : y^2 = (x + 6p)(x - 9p)(x - 18p).

Points are kept in the normalized shape (r/t^2, s/t^3) with gcd(r, t) =
gcd(s, t) = 1, because the field-construction hypotheses (t even,
gcd(s, 3p) = 1) read directly off that shape.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, is_perfect_square, is_prime

__all__ = [
    "TheoremClass",
    "CurveParams",
    "RationalPoint",
    "INFINITY",
    "make_curve",
    "on_curve",
    "point_from_xy",
    "neg",
    "add",
    "double_point",
    "duplication_x",
    "mul",
    "two_torsion",
    "count_points_mod",
    "torsion_structure",
    "TorsionStructure",
]


class TheoremClass(str, enum.Enum):
    SELMER_ONE = "SelmerOne"
    SELMER_ZERO = "SelmerZero"
    OUTSIDE = "OutsideTheorem"


@dataclass(frozen=True)
class CurveParams:
    p: int
    rootA: int  # 9p
    rootB: int  # 6p
    rootC: int  # 18p
    a2: int
    a6: int
    theorem_class: TheoremClass

    @property
    def roots(self) -> tuple[int, int, int]:
        """x-coordinates of the rational 2-torsion, in the order -6p, 9p, 18p."""
        return (-self.rootB, self.rootA, self.rootC)

    @property
    def discriminant(self) -> int:
        e1, e2, e3 = self.roots
        return 16 * ((e1 - e2) * (e1 - e3) * (e2 - e3)) ** 2


def make_curve(p: int) -> CurveParams:
    if not isinstance(p, int) or not is_prime(p) or p <= 5:
        raise DomainError(f"p must be a prime > 5, got {p!r}")
    a, b, c = 9 * p, 6 * p, 18 * p
    assert a * b + b * c == a * c
    r = p % 120
    if r in (17, 113):
        cls = TheoremClass.SELMER_ONE
    elif r in (53, 77):
        cls = TheoremClass.SELMER_ZERO
    else:
        cls = TheoremClass.OUTSIDE
    return CurveParams(p, a, b, c, b - a - c, a * b * c, cls)


@dataclass(frozen=True)
class RationalPoint:
    """Affine point (r/t^2, s/t^3), or the point at infinity when ``inf`` is set."""

    r: int = 0
    t: int = 1
    s: int = 0
    inf: bool = False

    def __post_init__(self):
        if self.inf:
            return
        if self.t <= 0:
            raise DomainError("t must be positive")
        if math.gcd(self.r, self.t) != 1 or math.gcd(self.s, self.t) != 1:
            raise DomainError(f"point ({self.r}, {self.t}, {self.s}) is not normalized")

    @property
    def x(self) -> Fraction:
        return Fraction(self.r, self.t**2)

    @property
    def y(self) -> Fraction:
        return Fraction(self.s, self.t**3)

    def __str__(self):
        if self.inf:
            return "O"
        return f"({self.x}, {self.y})"


INFINITY = RationalPoint(inf=True)


def point_from_xy(x, y) -> RationalPoint:
    """Normalize a rational affine point into (r, t, s) form."""
    x, y = Fraction(x), Fraction(y)
    dx, dy = x.denominator, y.denominator
    t = math.isqrt(dx)
    if t * t != dx:
        raise DomainError(f"denominator of x = {x} is not a square")
    if dy != t**3 and not (y == 0 and dy == 1):
        raise DomainError(f"denominator of y = {y} is not t^3 for t = {t}")
    return RationalPoint(x.numerator, t, y.numerator * (t**3 // dy))


def on_curve(P: RationalPoint, C: CurveParams) -> bool:
    if P.inf:
        return True
    r, t, s = P.r, P.t, P.s
    t2 = t * t
    return s * s == r**3 + C.a2 * r * r * t2 + C.a6 * t2**3


def _require(P: RationalPoint, C: CurveParams) -> None:
    if not on_curve(P, C):
        raise DomainError(f"{P} is not on E_{C.p}")


def neg(P: RationalPoint) -> RationalPoint:
    if P.inf:
        return P
    return RationalPoint(P.r, P.t, -P.s)


def add(P: RationalPoint, Q: RationalPoint, C: CurveParams) -> RationalPoint:
    """Chord-tangent addition on y^2 = x^3 + a2 x^2 + a6."""
    _require(P, C)
    _require(Q, C)
    if P.inf:
        return Q
    if Q.inf:
        return P
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 == 0:
            return INFINITY
        lam = (3 * x1 * x1 + 2 * C.a2 * x1) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - C.a2 - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return point_from_xy(x3, y3)


def duplication_x(P: RationalPoint, C: CurveParams) -> Fraction:
    """x(2P) from the closed form (r^4 - 8 a6 r t^6 - 4 a2 a6 t^8) / (4 s^2 t^2)."""
    r, t, s = P.r, P.t, P.s
    num = r**4 - 8 * C.a6 * r * t**6 - 4 * C.a2 * C.a6 * t**8
    return Fraction(num, 4 * s * s * t * t)


def double_point(P: RationalPoint, C: CurveParams) -> RationalPoint:
    _require(P, C)
    if P.inf or P.s == 0:
        return INFINITY
    x1, y1 = P.x, P.y
    x3 = duplication_x(P, C)
    lam = (3 * x1 * x1 + 2 * C.a2 * x1) / (2 * y1)
    y3 = lam * (x1 - x3) - y1
    return point_from_xy(x3, y3)


def mul(n: int, P: RationalPoint, C: CurveParams) -> RationalPoint:
    if n < 0:
        return mul(-n, neg(P), C)
    acc, base = INFINITY, P
    while n:
        if n & 1:
            acc = add(acc, base, C)
        n >>= 1
        if n:
            base = double_point(base, C)
    return acc


def two_torsion(C: CurveParams) -> list[RationalPoint]:
    return [INFINITY] + [RationalPoint(e, 1, 0) for e in C.roots]


def count_points_mod(C: CurveParams, l: int) -> int:
    """#E(F_l) including the point at infinity; l must be a prime of good reduction."""
    if not is_prime(l):
        raise DomainError(f"{l} is not prime")
    if l == 2 or C.discriminant % l == 0:
        raise DomainError(f"E_{C.p} has bad reduction at {l}")
    squares = [0] * l
    for y in range(l):
        squares[y * y % l] += 1
    a2, a6 = C.a2 % l, C.a6 % l
    n = 1
    for x in range(l):
        n += squares[(x * x * x + a2 * x * x + a6) % l]
    return n


@dataclass(frozen=True)
class TorsionStructure:
    invariants: tuple[int, ...]  # e.g. (2, 2)
    points: tuple[RationalPoint, ...]
    reduction_counts: dict

    @property
    def order(self) -> int:
        return math.prod(self.invariants)


def torsion_structure(C: CurveParams, primes=(11, 13, 17, 19, 23, 29, 31, 37)) -> TorsionStructure:
    """Torsion subgroup, pinned between E[2] and the gcd of reduction counts.

    Rational torsion injects into E(F_l) for odd l of good reduction, so its
    order divides every count; the full rational 2-torsion gives order >= 4.
    """
    counts = {}
    g = 0
    for l in primes:
        if C.discriminant % l == 0:
            continue
        counts[l] = count_points_mod(C, l)
        g = math.gcd(g, counts[l])
        if g == 4:
            break
    if g != 4:
        raise DomainError(f"reduction counts {counts} do not pin the torsion of E_{C.p} to order 4")
    return TorsionStructure((2, 2), tuple(two_torsion(C)), counts)


def is_torsion(P: RationalPoint, C: CurveParams) -> bool:
    """Torsion is exactly E[2] for these curves (see torsion_structure)."""
    return P.inf or P.s == 0


def naive_height(P: RationalPoint) -> int:
    return 0 if P.inf else max(abs(P.r), P.t**2)


def is_square_rational(q: Fraction) -> bool:
    q = Fraction(q)
    return q >= 0 and is_perfect_square(q.numerator) and is_perfect_square(q.denominator)
