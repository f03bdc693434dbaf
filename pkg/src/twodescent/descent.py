"""Q(S,2), the 2-descent map and coset arithmetic modulo the torsion image."""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .arith import DomainError, class_mul, is_perfect_square, val
from .curve import CurveParams, RationalPoint, on_curve, two_torsion

__all__ = [
    "SelmerPair",
    "class_key",
    "enumerate_QS2",
    "all_pairs",
    "phi",
    "pair_mul",
    "torsion_image",
    "coset",
    "coset_reduce",
    "cosets",
    "in_QS2",
]


class SelmerPair(NamedTuple):
    b1: int
    b2: int

    def __str__(self):
        return f"({self.b1},{self.b2})"


def class_key(b: int) -> tuple[int, int, int]:
    """Total order on square classes: sign, then odd part, then 2-content."""
    v2 = val(b, 2)
    return (0 if b > 0 else 1, abs(b) >> v2, v2)


def enumerate_QS2(C: CurveParams) -> list[int]:
    """The 32 squarefree classes supported on {-1, 2, 3, 5, p}."""
    out = []
    for sign, bits in itertools.product((1, -1), range(16)):
        m = sign
        for i, q in enumerate((2, 3, 5, C.p)):
            if bits >> i & 1:
                m *= q
        out.append(m)
    return sorted(out, key=class_key)


def all_pairs(C: CurveParams) -> list[SelmerPair]:
    qs = enumerate_QS2(C)
    return [SelmerPair(a, b) for a in qs for b in qs]


def in_QS2(b: int, C: CurveParams) -> bool:
    if b == 0:
        return False
    m = abs(b)
    for q in (2, 3, 5, C.p):
        if m % q == 0:
            m //= q
            if m % q == 0:
                return False
    return m == 1


def phi(P: RationalPoint, C: CurveParams) -> SelmerPair:
    """Square classes of (x + 6p, x - 9p).

    At a root e the vanishing coordinate is replaced by the product of the
    other two differences, (e - e')(e - e''), as the descent recipe requires.
    """
    if not on_curve(P, C):
        raise DomainError(f"{P} is not on E_{C.p}")
    if P.inf:
        return SelmerPair(1, 1)
    e1, e2, e3 = C.roots
    x = P.x
    d1, d2 = x - e1, x - e2
    if d1 == 0:
        d1 = (e1 - e2) * (e1 - e3)
    if d2 == 0:
        d2 = (e2 - e1) * (e2 - e3)
    # a rational's square class is that of numerator * denominator
    return SelmerPair(
        _s_class(d1.numerator * d1.denominator, C.p),
        _s_class(d2.numerator * d2.denominator, C.p),
    )


def _s_class(n: int, p: int) -> int:
    """Square class of n, which must lie in Q(S,2); only S-primes are divided out,
    so huge coordinates of multiples of a point need no factoring."""
    m, cls = abs(n), (1 if n > 0 else -1)
    for q in (2, 3, 5, p):
        e = 0
        while m % q == 0:
            m //= q
            e += 1
        if e % 2:
            cls *= q
    if not is_perfect_square(m):
        raise DomainError(f"{n} is not an S-unit times a square")
    return cls


def pair_mul(u: SelmerPair, v: SelmerPair) -> SelmerPair:
    return SelmerPair(class_mul(u.b1, v.b1), class_mul(u.b2, v.b2))


def torsion_image(C: CurveParams) -> tuple[SelmerPair, ...]:
    return tuple(phi(T, C) for T in two_torsion(C))


def coset(pair: SelmerPair, A) -> list[SelmerPair]:
    return [pair_mul(pair, a) for a in A]


def _pair_key(pair: SelmerPair):
    return (class_key(pair.b1), class_key(pair.b2))


def coset_reduce(pair: SelmerPair, A) -> SelmerPair:
    """Least member of pair*A under the canonical class order."""
    return min(coset(pair, A), key=_pair_key)


def cosets(C: CurveParams, A=None) -> list[SelmerPair]:
    """Canonical representatives of the 256 cosets of A in Q(S,2)^2."""
    A = A or torsion_image(C)
    reps = {coset_reduce(pr, A) for pr in all_pairs(C)}
    return sorted(reps, key=_pair_key)
