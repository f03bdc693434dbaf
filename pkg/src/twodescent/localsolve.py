"""Local solvability of the homogeneous spaces

    b1 z1^2 - b2 z2^2 = 15p,      b1 z1^2 - b1 b2 z3^2 = 24p

over R and Q_l.

Once z1 is fixed the two equations decouple, so the space has a Q_l-point
iff some z1 in Q_l (or the point at infinity) makes both

    g2(z1) = b2 (b1 z1^2 - 15p)   and   g3(z1) = b1 b2 (b1 z1^2 - 24p)

squares.  ``decide_local`` searches balls a + l^j Z_l of z1, plus balls of
w = 1/z1 inside l Z_l for the negative-valuation region, refining only those
balls on which a square class is not yet constant.

Real place is encoded as place 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    DomainError,
    is_prime,
    is_square_Ql,
    legendre,
    sqrt_mod_prime_power,
    unit_part,
    val,
)
from .descent import SelmerPair, pair_mul

__all__ = [
    "REAL",
    "Rule",
    "HomSpace",
    "Witness",
    "LocalVerdict",
    "default_depth",
    "verdict_real",
    "filter_2adic",
    "filter_b2_even",
    "filter_3adic",
    "filter_padic",
    "filter_5adic",
    "filter_3p_special",
    "analytic_filters",
    "reduce_by_coset_parity",
    "decide_local",
    "check_witness",
    "pattern_admissible",
    "verdict_all_places",
    "places",
]

REAL = 0


class Rule(str, enum.Enum):
    REAL_SIGN = "real-sign"
    GCD_EVEN_2ADIC = "2adic-gcd-even"
    B2_EVEN_2ADIC = "2adic-b2-even-coset"
    B1_3ADIC = "3adic-b1-residue"
    B2_3ADIC = "3adic-b2-residue"
    B1_PADIC = "padic-b1-residue"
    B2_PADIC = "padic-b2-residue"
    GCD5_5ADIC = "5adic-gcd-residue"
    B2_5ADIC = "5adic-b2-residue"
    NORM_3ADIC = "3adic-difference-norm"
    HENSEL_WITNESS = "hensel-witness"
    EXHAUSTED = "exhausted-refutation"
    UNDECIDED = "undecided"


FILTER_RULES = frozenset(
    {
        Rule.REAL_SIGN,
        Rule.GCD_EVEN_2ADIC,
        Rule.B2_EVEN_2ADIC,
        Rule.B1_3ADIC,
        Rule.B2_3ADIC,
        Rule.B1_PADIC,
        Rule.B2_PADIC,
        Rule.GCD5_5ADIC,
        Rule.B2_5ADIC,
        Rule.NORM_3ADIC,
    }
)


@dataclass(frozen=True)
class HomSpace:
    pair: SelmerPair
    p: int

    @property
    def b1(self) -> int:
        return self.pair.b1

    @property
    def b2(self) -> int:
        return self.pair.b2

    @property
    def rhs1(self) -> int:
        return 15 * self.p

    @property
    def rhs2(self) -> int:
        return 24 * self.p

    def residuals(self, z1, z2, z3) -> tuple[Fraction, Fraction]:
        z1, z2, z3 = Fraction(z1), Fraction(z2), Fraction(z3)
        b1, b2 = self.b1, self.b2
        return (
            b1 * z1 * z1 - b2 * z2 * z2 - self.rhs1,
            b1 * z1 * z1 - b1 * b2 * z3 * z3 - self.rhs2,
        )


@dataclass(frozen=True)
class Witness:
    """Approximate l-adic point: z1 exact, z2 and z3 correct to relative
    precision l^precision, enough for Newton's method to converge in each
    of the two (decoupled) equations."""

    z: tuple[Fraction, Fraction, Fraction]
    precision: int

    @property
    def residues(self):
        return self.z

    def pattern(self, l: int) -> tuple:
        """Valuation triple (None for an exact zero)."""
        return tuple(None if c == 0 else val(c, l) for c in self.z)


@dataclass(frozen=True)
class LocalVerdict:
    place: int
    solvable: bool | None
    rule: Rule
    witness: Witness | None = None
    refutation_depth: int | None = None
    nodes: int = 0
    pair: SelmerPair | None = field(default=None, compare=False)


def places(p: int) -> tuple[int, ...]:
    return (REAL, 2, 3, 5, p)


def default_depth(H: HomSpace, l: int) -> int:
    return 2 * val(4 * H.b1 * H.b2 * H.rhs1 * H.rhs2, l) + 3


# ---------------------------------------------------------------- filters


def _refuted(H, l, rule):
    return LocalVerdict(l, False, rule, pair=H.pair)


def _real_sqrt(T: Fraction) -> Fraction:
    """Rational approximation of sqrt(T) to six decimals (kept exact, no floats)."""
    return Fraction(math.isqrt(T.numerator * 10**12 // T.denominator), 10**6)


def verdict_real(H: HomSpace) -> LocalVerdict:
    # b1 < 0 makes the left sides negative for whichever equation has b2's sign against it
    if H.b1 < 0:
        return _refuted(H, REAL, Rule.REAL_SIGN)
    # b1 > 0: z1 large works when b2 > 0, z1 = 0 when b2 < 0
    z1 = 0 if H.b2 < 0 else math.isqrt(H.rhs2) + 1
    t2 = Fraction(H.b1 * z1 * z1 - H.rhs1, H.b2)
    t3 = Fraction(H.b1 * z1 * z1 - H.rhs2, H.b1 * H.b2)
    assert t2 > 0 and t3 > 0
    w = Witness((Fraction(z1), _real_sqrt(t2), _real_sqrt(t3)), 0)
    return LocalVerdict(REAL, True, Rule.HENSEL_WITNESS, witness=w, pair=H.pair)


def filter_2adic(H: HomSpace) -> LocalVerdict | None:
    if H.b1 % 2 == 0 and H.b2 % 2 == 0:
        return _refuted(H, 2, Rule.GCD_EVEN_2ADIC)
    return None


def filter_b2_even(H: HomSpace) -> LocalVerdict | None:
    """b2 even, b1 odd: the coset partner (6p b1, p b2) has even gcd."""
    if H.b2 % 2 == 0 and H.b1 % 2:
        return _refuted(H, 2, Rule.B2_EVEN_2ADIC)
    return None


def filter_3adic(H: HomSpace) -> LocalVerdict | None:
    b1, b2, p = H.b1, H.b2, H.p
    if b1 % 3 == 0 and b2 % 3:
        # forces 3 | z2, then (b1/3) z1^2 = 5p (mod 3)
        if legendre(b1 // 3, 3) != legendre(2 * p, 3):
            return _refuted(H, 3, Rule.B1_3ADIC)
    if b2 % 3 == 0 and b1 % 3:
        # forces 3 | z1, then -(b2/3) z2^2 = 5p (mod 3)
        if legendre(-b2 // 3, 3) != legendre(2 * p, 3):
            return _refuted(H, 3, Rule.B2_3ADIC)
    return None


def filter_padic(H: HomSpace) -> LocalVerdict | None:
    b1, b2, p = H.b1, H.b2, H.p
    if b1 % p == 0 and b2 % p:
        # p | z2, then (b1/p) z1^2 = 15 (mod p)
        if legendre(b1 // p, p) != legendre(15, p):
            return _refuted(H, p, Rule.B1_PADIC)
    if b2 % p == 0 and b1 % p:
        # p | z1, then -(b2/p) z2^2 = 15 (mod p)
        if legendre(-b2 // p, p) != legendre(15, p):
            return _refuted(H, p, Rule.B2_PADIC)
    return None


def filter_5adic(H: HomSpace) -> LocalVerdict | None:
    b1, b2, p = H.b1, H.b2, H.p
    if b1 % 5 == 0 and b2 % 5 == 0:
        # only v(z3) = -1, v(z1) >= 0 survives; then -(b1 b2/25) u3^2 = 24p (mod 5)
        if legendre(b1 * b2 // 25, 5) != legendre(p, 5):
            return _refuted(H, 5, Rule.GCD5_5ADIC)
    elif b2 % 5 == 0:
        # 5 | z1, z2 a unit, then -(b2/5) z2^2 = 3p (mod 5)
        if legendre(b2 // 5, 5) != legendre(3 * p, 5):
            return _refuted(H, 5, Rule.B2_5ADIC)
    return None


def filter_3p_special(H: HomSpace) -> LocalVerdict | None:
    """(3, -p): subtracting the equations gives z2^2 - 3 z3^2 = -9, not a 3-adic norm."""
    if H.pair == (3, -H.p):
        return _refuted(H, 3, Rule.NORM_3ADIC)
    return None


_FILTERS = {
    REAL: (lambda H: verdict_real(H) if H.b1 < 0 else None,),
    2: (filter_2adic, filter_b2_even),
    3: (filter_3adic, filter_3p_special),
    5: (filter_5adic,),
}


def analytic_filters(H: HomSpace, l: int) -> LocalVerdict | None:
    """First analytic refutation of H at place l, if any applies."""
    fs = _FILTERS.get(l, ())
    if l == H.p:
        fs = (filter_padic,)
    for f in fs:
        v = f(H)
        if v is not None:
            return v
    return None


def reduce_by_coset_parity(H: HomSpace, A) -> HomSpace:
    """Coset-equivalent space with gcd(b1, b2) prime to 3p, or with both
    coordinates even when b2 is even (so the 2-adic gcd filter applies)."""
    one, t_neg6p, t_9p, t_18p = A
    b1, b2 = H.pair
    if b2 % 2 == 0:
        if b1 % 2:
            return HomSpace(pair_mul(H.pair, t_18p), H.p)
        return H
    for a in (one, t_9p, t_18p, t_neg6p):
        c = pair_mul(H.pair, a)
        if math.gcd(c.b1, c.b2) % 3 and math.gcd(c.b1, c.b2) % H.p:
            return HomSpace(c, H.p)
    return H


# ---------------------------------------------------------------- search


def _ball_class(alpha: int, beta: int, a: int, j: int, l: int, e: int) -> bool | None:
    """Square class of alpha x^2 + beta on a + l^j Z_l, or None if not constant."""
    qa = alpha * a * a + beta
    if qa == 0:
        return None
    v0 = val(qa, l)
    spread = val(alpha, l) + 2 * j
    if a:
        spread = min(spread, val(2 * alpha * a, l) + j)
    if spread >= v0 + e:
        return is_square_Ql(qa, l)
    return None


def _lsqrt(T: Fraction, l: int, prec: int) -> Fraction:
    """An l-adic square root of T to relative precision l^prec."""
    v = val(T, l)
    u = unit_part(T, l)
    mod = l**prec
    u_int = u.numerator * pow(u.denominator, -1, mod) % mod
    r = sqrt_mod_prime_power(u_int, l, prec)
    if r is None:
        raise DomainError(f"{T} is not a square in Q_{l}")
    return Fraction(l) ** (v // 2) * r


def check_witness(H: HomSpace, l: int, w: Witness) -> bool:
    """Both equations satisfied exactly or with v(f) > 2 v(f') in the free variable."""
    z1, z2, z3 = w.z
    if l == REAL:
        # real witnesses carry z1 exactly; z2, z3 are only decimal approximations
        return (H.b1 * z1 * z1 - H.rhs1) / H.b2 >= 0 and (H.b1 * z1 * z1 - H.rhs2) / (H.b1 * H.b2) >= 0
    f2, f3 = H.residuals(z1, z2, z3)
    for f, d in ((f2, 2 * H.b2 * z2), (f3, 2 * H.b1 * H.b2 * z3)):
        if f == 0:
            continue
        if d == 0 or not val(f, l) > 2 * val(d, l):
            return False
    return True


def _make_witness(H: HomSpace, l: int, z1: Fraction) -> Witness:
    b1, b2 = H.b1, H.b2
    t2 = (b1 * z1 * z1 - H.rhs1) / b2
    t3 = (b1 * z1 * z1 - H.rhs2) / (b1 * b2)
    prec = 2 * val(2, l) + val(b1 * b2, l) + 2
    if l == 2:
        prec = max(prec, 4)
    w = Witness((z1, _lsqrt(t2, l, prec), _lsqrt(t3, l, prec)), prec)
    assert check_witness(H, l, w), (H, l, w)
    return w


def decide_local(H: HomSpace, l: int, depth_limit: int | None = None) -> LocalVerdict:
    """Decide whether H has a Q_l-point (l = 0 for the real place)."""
    if l == REAL:
        return verdict_real(H)
    if not is_prime(l):
        raise DomainError(f"{l} is not a prime")
    if depth_limit is None:
        depth_limit = default_depth(H, l)
    if depth_limit < 1:
        raise DomainError("depth_limit must be >= 1")
    b1, b2, P1, P2 = H.b1, H.b2, H.rhs1, H.rhs2
    e = 3 if l == 2 else 1
    # (alpha2, beta2, alpha3, beta3) for the z1 chart and the w = 1/z1 chart
    charts = {
        "z": (b1 * b2, -P1 * b2, b1 * b1 * b2, -P2 * b1 * b2),
        "w": (-P1 * b2, b1 * b2, -P2 * b1 * b2, b1 * b1 * b2),
    }
    frontier = [("z", a, 1) for a in range(l)] + [("w", 0, 1)]
    nodes = 0
    depth = 1
    unresolved = False
    while frontier:
        nxt = []
        for chart, a, j in frontier:
            nodes += 1
            al2, be2, al3, be3 = charts[chart]
            c2 = _ball_class(al2, be2, a, j, l, e)
            if c2 is False:
                continue
            c3 = _ball_class(al3, be3, a, j, l, e)
            if c3 is False:
                continue
            if c2 and c3:
                if chart == "z":
                    z1 = Fraction(a)
                else:
                    z1 = Fraction(1, a if a else l**j)
                w = _make_witness(H, l, z1)
                return LocalVerdict(l, True, Rule.HENSEL_WITNESS, witness=w, nodes=nodes, pair=H.pair)
            if j < depth_limit:
                step = l**j
                nxt += [(chart, a + i * step, j + 1) for i in range(l)]
            else:
                unresolved = True
        frontier = nxt
        depth += 1
    if unresolved:
        return LocalVerdict(l, None, Rule.UNDECIDED, nodes=nodes, pair=H.pair)
    return LocalVerdict(l, False, Rule.EXHAUSTED, refutation_depth=depth - 1, nodes=nodes, pair=H.pair)


def pattern_admissible(H: HomSpace, l: int, pattern) -> bool:
    """Whether a valuation triple (None = zero) obeys the negative-valuation constraints:
    any negative entry forces all three equal, except that at 5 with 5 | gcd(b1, b2)
    the pattern v(z3) = -1, v(z1) >= 0 is also allowed."""
    big = 10**9
    k1, k2, k3 = (big if k is None else k for k in pattern)
    if min(k1, k2, k3) >= 0:
        return True
    if k1 == k2 == k3:
        return True
    if l == 5 and H.b1 % 5 == 0 and H.b2 % 5 == 0:
        return k3 == -1 and k1 >= 0 and k2 >= 0
    return False


def verdict_all_places(
    H: HomSpace, use_filters: bool = True, spot_check_places: int = 0
) -> list[LocalVerdict]:
    """Verdicts at infinity and each finite place of S, then optional spot checks
    at good primes (which are solvable by the good-reduction argument)."""
    out = []
    for l in places(H.p):
        v = analytic_filters(H, l) if use_filters else None
        out.append(v if v is not None else decide_local(H, l))
    if spot_check_places:
        checked = 0
        l = 7
        while checked < spot_check_places and l <= 100:
            if is_prime(l) and l != H.p:
                out.append(decide_local(H, l))
                checked += 1
            l += 2
    return out
