"""Class numbers of quadratic fields, and the biquadratic candidate audit.

``h_quadratic`` counts reduced binary quadratic forms: reduced definite forms
for d < 0, cycles of reduced indefinite forms for d > 0 (which gives the
narrow class number, halved when the fundamental unit has norm +1).

``h_by_ideals`` is an independent route used to validate it: enumerate the
primitive ideals of norm up to the Minkowski bound in Hermite normal form and
sort them into classes with an explicit principal-ideal search.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .arith import DomainError, is_perfect_square, squarefree_part

__all__ = [
    "MAX_ABS_DISC",
    "ClassMethod",
    "QuadClassData",
    "BiquadClassEstimate",
    "is_fundamental",
    "fundamental_discriminant",
    "reduced_definite_forms",
    "reduced_indefinite_forms",
    "h_quadratic",
    "h_by_ideals",
    "fundamental_unit",
    "biquad_estimate",
]


MAX_ABS_DISC = 10**7  # form enumeration is linear in |d|


class ClassMethod(str, enum.Enum):
    DEFINITE = "DefiniteFormsCount"
    INDEFINITE = "IndefiniteCycleCount"


@dataclass(frozen=True)
class QuadClassData:
    d: int
    h: int
    method: ClassMethod
    narrow_h: int | None = None  # real fields only


def is_fundamental(d: int) -> bool:
    if d in (0, 1) or is_perfect_square(d):
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def fundamental_discriminant(m: int) -> int:
    """Discriminant of Q(sqrt m) for squarefree m != 0, 1."""
    if m in (0, 1) or squarefree_part(m) != m:
        raise DomainError(f"{m} is not a squarefree integer other than 0, 1")
    return m if m % 4 == 1 else 4 * m


# ---------------------------------------------------------------- forms


def reduced_definite_forms(d: int) -> list[tuple[int, int, int]]:
    """Primitive reduced positive forms (a, b, c) of discriminant d < 0."""
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def _lt_sqrt(x: int, d: int) -> bool:
    """x < sqrt(d) for nonsquare d > 0."""
    return x < 0 or x * x < d


def reduced_indefinite_forms(d: int) -> list[tuple[int, int, int]]:
    """Forms (a, b, c) of discriminant d > 0 with 0 < b < sqrt d and
    sqrt d - b < 2|a| < sqrt d + b."""
    out = []
    root = math.isqrt(d)
    b = 1 if d % 2 else 2
    while b * b < d:
        ac = (b * b - d) // 4  # negative
        for a in range(max(1, (root - b) // 2), (root + b) // 2 + 2):
            if ac % a:
                continue
            if not _lt_sqrt(2 * a - b, d) or _lt_sqrt(2 * a + b, d):
                continue
            for sa in (a, -a):
                c = ac // sa
                if math.gcd(math.gcd(sa, b), c) == 1:
                    out.append((sa, b, c))
        b += 2
    return out


def _rho(f: tuple[int, int, int], d: int, root: int) -> tuple[int, int, int]:
    """Reduction step (a, b, c) -> (c, b', (b'^2 - d) / 4c), b' = -b mod 2|c|, b' < sqrt d maximal."""
    _, b, c = f
    m = 2 * abs(c)
    r = -b % m
    b2 = r + m * ((root - r) // m)
    return (c, b2, (b2 * b2 - d) // (4 * c))


def h_quadratic(d: int, from_squarefree: bool = False) -> QuadClassData:
    """Class number of the quadratic field of discriminant d.

    With ``from_squarefree`` the input is a squarefree m and is first
    converted to the discriminant of Q(sqrt m).
    """
    if from_squarefree:
        d = fundamental_discriminant(d)
    elif not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    if abs(d) > MAX_ABS_DISC:
        raise DomainError(f"|{d}| exceeds the enumeration limit {MAX_ABS_DISC}")
    if d < 0:
        return QuadClassData(d, len(reduced_definite_forms(d)), ClassMethod.DEFINITE)
    root = math.isqrt(d)
    forms = set(reduced_indefinite_forms(d))
    cycles = []
    while forms:
        f = start = forms.pop()
        cyc = [f]
        while True:
            f = _rho(f, d, root)
            if f == start:
                break
            forms.discard(f)
            cyc.append(f)
        cycles.append(cyc)
    b0 = root if (root - d) % 2 == 0 else root - 1
    principal = (1, b0, (b0 * b0 - d) // 4)
    pcycle = next(c for c in cycles if principal in c)
    narrow = len(cycles)
    # a form with a = -1 in the principal cycle means a unit of norm -1
    h = narrow if any(a == -1 for a, _, _ in pcycle) else narrow // 2
    return QuadClassData(d, h, ClassMethod.INDEFINITE, narrow)


# ---------------------------------------------------------------- ideals


class _Order:
    """O_K = Z[w] with w^2 = tr*w - nm; elements are pairs (x, y) = x + y w."""

    def __init__(self, d: int):
        self.d = d
        self.tr, self.nm = (1, (1 - d) // 4) if d % 4 == 1 else (0, -d // 4)

    def mul(self, u, v):
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        return (x1 * x2 - self.nm * yy, x1 * y2 + x2 * y1 + self.tr * yy)

    def norm(self, u) -> int:
        x, y = u
        return x * x + self.tr * x * y + self.nm * y * y

    def conj(self, u):
        x, y = u
        return (x + self.tr * y, -y)


def _hnf(gens) -> tuple[int, int, int]:
    """Lattice spanned by gens in Z^2 (coordinates on 1, w) as (a, b, c):
    basis a*1 and b + c*w with 0 <= b < a."""
    px, py, a = 0, 0, 0
    for x, y in gens:
        # Euclid on the w-coordinate; the leftover vector lies on the 1-axis
        while y:
            q = py // y
            px, py, x, y = x, y, px - q * x, py - q * y
        a = math.gcd(a, x)
    if py < 0:
        px, py = -px, -py
    if a == 0 or py == 0:
        raise DomainError("lattice has rank < 2")
    return (a, px % a, py)


def _ideal_gens(I):
    a, b, c = I
    return [(a, 0), (b, c)]


def _contains(I, u) -> bool:
    a, b, c = I
    x, y = u
    return y % c == 0 and (x - (y // c) * b) % a == 0


def fundamental_unit(d: int) -> tuple[int, int]:
    """Least unit eps = x + y w > 1 of Q(sqrt d), d > 0, from the continued fraction of w."""
    O = _Order(d)
    # w = (P + sqrt D) / Q
    if d % 4 == 1:
        P, Q, D = 1, 2, d
    else:
        P, Q, D = 0, 1, d // 4
    root = math.isqrt(D)
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = (P + root) // Q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        # h1/k1 approximates w, so h1 - k1 w is small and of norm +-1 for a unit
        if abs(O.norm((h1, -k1))) == 1:
            return O.conj((h1, -k1))
        P = a * Q - P
        Q = (D - P * P) // Q


def _is_principal(I, O: _Order, N: int, unit_bound: int | None) -> bool:
    """Search for a generator: an element of I with |norm| = N."""
    d = O.d
    if d < 0:
        ybound = math.isqrt(4 * N // -d) + 1
    else:
        # some generator has sqrt(N) <= |alpha| < sqrt(N) eps, so |y| sqrt d < sqrt(N)(eps + 1)
        ybound = math.isqrt(N * (unit_bound + 1) ** 2 // d) + 1
    for y in range(0, ybound + 1):
        for target in (N, -N) if d > 0 else (N,):
            disc = d * y * y + 4 * target
            if disc < 0 or not is_perfect_square(disc):
                continue
            s = math.isqrt(disc)
            for num in (-O.tr * y + s, -O.tr * y - s):
                if num % 2:
                    continue
                for u in ((num // 2, y), (-(num // 2), -y)):
                    if _contains(I, u):
                        return True
    return False


def h_by_ideals(d: int) -> int:
    """Class number by Minkowski-bound ideal enumeration (independent of form reduction)."""
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    O = _Order(d)
    # Minkowski: sqrt|d|/2 for real, (2/pi) sqrt|d| for imaginary; both below this integer bound
    bound = math.isqrt(abs(d)) // 2 + 1 if d > 0 else math.isqrt(4 * (-d) // 9) + 1
    unit_bound = None
    if d > 0:
        x, y = fundamental_unit(d)
        unit_bound = abs(x) + abs(y) * (math.isqrt(d) + 2)
    ideals = []
    for a in range(1, bound + 1):
        for b in range(a):
            if O.norm((b, 1)) % a == 0:
                ideals.append((a, b, 1))
    classes: list = []
    for I in ideals:
        for J in classes:
            prod = [O.mul(u, O.conj(v)) for u in _ideal_gens(I) for v in _ideal_gens(J)]
            L = _hnf(prod)
            if _is_principal(L, O, L[0] * L[2], unit_bound):
                break
        else:
            classes.append(I)
    return len(classes)


# ---------------------------------------------------------------- biquadratic audit


@dataclass(frozen=True)
class BiquadClassEstimate:
    h1: int
    h2: int
    h3: int
    real: bool
    candidates: tuple[int, ...]

    @property
    def parity_even_certain(self) -> bool:
        return all(c % 2 == 0 for c in self.candidates)


def biquad_estimate(K) -> BiquadClassEstimate:
    """Candidate class numbers Q*h1*h2*h3/2^k over every admissible unit index Q.

    k = 1 and Q in {1, 2} for imaginary K; k = 2 and Q in {1, 2, 4} for real K.
    Candidates that are not integers are dropped.
    """
    if not getattr(K, "factorization_complete", True):
        raise DomainError("d2 is only partially factored; subfield discriminants unknown")
    hs = [h_quadratic(m, from_squarefree=True).h for m in (K.d1, K.d2, K.d3)]
    prod = math.prod(hs)
    if K.real:
        qs, den = (1, 2, 4), 4
    else:
        qs, den = (1, 2), 2
    cands = sorted({q * prod // den for q in qs if q * prod % den == 0})
    return BiquadClassEstimate(*hs, K.real, tuple(cands))
