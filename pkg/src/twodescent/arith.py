"""Exact integer/rational primitives shared by the descent modules.

Square classes in Q*/(Q*)^2 are represented by signed squarefree integers;
multiplying two classes is ``squarefree_part(a * b)``.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "DomainError",
    "FactorizationIncomplete",
    "is_prime",
    "factorint",
    "squarefree_part",
    "support",
    "class_mul",
    "legendre",
    "val",
    "unit_part",
    "sqrt_mod_prime_power",
    "is_square_Ql",
    "is_perfect_square",
]


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class FactorizationIncomplete(ArithmeticError):
    """Raised when a cofactor could not be split within the configured budget."""

    def __init__(self, n, partial, cofactor):
        super().__init__(f"could not fully factor {n}: unsplit cofactor {cofactor}")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


# Deterministic for n < 3.3e24 with these bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= 3_317_044_064_679_887_385_961_981:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(20)]
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, budget: int) -> int | None:
    """Pollard-Brent rho; returns a nontrivial factor or None when the budget runs out."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            spent += r
            if spent > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factorint(n: int, trial_bound: int = 10_000, rho_budget: int = 2_000_000) -> dict[int, int]:
    """Factor |n| into primes.

    Trial division up to ``trial_bound`` then Pollard-Brent on what is left.
    Raises FactorizationIncomplete (carrying the partial factorization) if a
    composite cofactor survives the rho budget.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q, step = 7, 4
    while q <= trial_bound and q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += step
        step = 6 - step
    if n == 1:
        return out
    stack = [n]
    unsplit = []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _brent(m, rho_budget)
        if f is None:
            unsplit.append(m)
        else:
            stack += [f, m // f]
    if unsplit:
        cof = math.prod(unsplit)
        raise FactorizationIncomplete(n, out, cof)
    return out


def squarefree_part(n: int, **factor_opts) -> int:
    """Signed squarefree m with n/m a positive perfect square."""
    if n == 0:
        raise DomainError("squarefree_part(0) is undefined")
    m = 1
    for q, e in factorint(n, **factor_opts).items():
        if e % 2:
            m *= q
    return m if n > 0 else -m


def support(n: int) -> frozenset:
    """Primes dividing n, plus -1 when n < 0."""
    s = set(factorint(n)) if abs(n) > 1 else set()
    if n < 0:
        s.add(-1)
    return frozenset(s)


@lru_cache(maxsize=1 << 16)
def class_mul(a: int, b: int) -> int:
    """Product in Q*/(Q*)^2 of two squarefree representatives."""
    g = math.gcd(a, b)
    return (a // g) * (b // g)


def legendre(a: int, l: int) -> int:
    if l < 3 or l % 2 == 0 or not is_prime(l):
        raise DomainError(f"legendre symbol needs an odd prime, got {l}")
    r = pow(a % l, (l - 1) // 2, l)
    return -1 if r == l - 1 else r


def val(a, l: int) -> int:
    """l-adic valuation of a nonzero integer or Fraction."""
    a = Fraction(a)
    if a == 0:
        raise DomainError("valuation of 0")
    v = 0
    num, den = a.numerator, a.denominator
    while num % l == 0:
        num //= l
        v += 1
    while den % l == 0:
        den //= l
        v -= 1
    return v


def unit_part(a, l: int) -> Fraction:
    """a / l^val(a, l)."""
    a = Fraction(a)
    return a / Fraction(l) ** val(a, l)


def _sqrt_mod_prime(a: int, l: int) -> int | None:
    a %= l
    if a == 0:
        return 0
    if l == 2:
        return a
    if pow(a, (l - 1) // 2, l) != 1:
        return None
    # Tonelli-Shanks
    q, s = l - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (l - 1) // 2, l) != l - 1:
        z += 1
    m, c, t, r = s, pow(z, q, l), pow(a, q, l), pow(a, (q + 1) // 2, l)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % l
            i += 1
        b = pow(c, 1 << (m - i - 1), l)
        m, c, t, r = i, b * b % l, t * b * b % l, r * b % l
    return min(r, l - r)


def sqrt_mod_prime_power(a: int, l: int, k: int) -> int | None:
    """Smallest nonnegative x with x^2 = a (mod l^k), or None."""
    if k < 1:
        raise DomainError("k must be positive")
    mod = l**k
    a %= mod
    if a == 0:
        return 0
    v = val(a, l)
    if v % 2:
        return None
    m = k - v
    roots = _unit_roots(a // l**v, l, m)
    if not roots:
        return None
    # x = l^(v/2) * y with y^2 = u (mod l^m); the least x comes from the least y
    return l ** (v // 2) * min(roots) % mod


def _unit_roots(u: int, l: int, m: int) -> list[int]:
    """All square roots of the unit u modulo l^m."""
    mod = l**m
    if l == 2:
        if m <= 3:
            return [x for x in range(1, mod, 2) if x * x % mod == u % mod]
        if u % 8 != 1:
            return []
        x = 1
        for j in range(3, m):
            if (x * x - u) % (1 << (j + 1)):
                x += 1 << (j - 1)
        half = mod >> 1
        return sorted({x % mod, -x % mod, (x + half) % mod, (-x + half) % mod})
    r = _sqrt_mod_prime(u, l)
    if r is None:
        return []
    x, prec = r, 1
    while prec < m:
        prec = min(2 * prec, m)
        q = l**prec
        x = (x - (x * x - u) * pow(2 * x, -1, q)) % q
    return sorted({x % mod, -x % mod})


def is_square_Ql(a, l: int) -> bool:
    """Whether a nonzero rational is a square in Q_l (l prime) or in R (l = 0)."""
    a = Fraction(a)
    if a == 0:
        raise DomainError("0 has no square class")
    if l == 0:
        return a > 0
    v = val(a, l)
    if v % 2:
        return False
    u = unit_part(a, l)
    num, den = u.numerator, u.denominator
    if l == 2:
        return num * den % 8 == 1
    return legendre(num * den, l) == 1


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n
