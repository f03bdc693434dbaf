"""Biquadratic fields K = Q(sqrt(3p), sqrt(r - 21pt^2)) attached to points of E_p.

The certificate records what can be decided by rational arithmetic: parity
of t, gcd(s, 3p), the norm identity s^2 - 972p^3 t^6 = r^2 (r - 21pt^2), the
class of s mod 4, and the sign adjustment m that makes m*alpha congruent to
a square mod 4.  Ideal factorization in O_K is not attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import DomainError, FactorizationIncomplete, class_mul, factorint, is_perfect_square
from .curve import CurveParams, RationalPoint, double_point, is_torsion, on_curve

__all__ = [
    "CertificateError",
    "BiquadField",
    "AlphaCertificate",
    "FamilyLevel",
    "field_discriminant_term",
    "build_field",
    "alpha_certificate",
    "double_family",
    "same_field",
]

CHECKS = ("t_even", "gcd_s_3p", "norm_identity")


class CertificateError(DomainError):
    """A theorem hypothesis failed; ``check`` names it, ``level`` is the doubling level."""

    def __init__(self, check: str, message: str, level: int | None = None):
        where = f" at level {level}" if level is not None else ""
        super().__init__(f"check {check} failed{where}: {message}")
        self.check = check
        self.detail = message
        self.level = level


@dataclass(frozen=True)
class BiquadField:
    d1: int
    d2: int
    d3: int
    real: bool
    # False when r - 21pt^2 had an unsplit cofactor: d2 and d3 then carry that
    # cofactor as-is and are squarefree only up to it
    factorization_complete: bool = True

    @property
    def subfields(self) -> tuple[int, int, int]:
        return (self.d1, self.d2, self.d3)


def field_discriminant_term(P: RationalPoint, C: CurveParams) -> int:
    """r - 21pt^2, i.e. r + a2 t^2: the radicand of the second generator."""
    return P.r + C.a2 * P.t * P.t


def _squarefree_or_partial(n: int, factor_opts) -> tuple[int, bool]:
    try:
        fac = factorint(n, **factor_opts)
        complete = True
    except FactorizationIncomplete as exc:
        fac, complete = dict(exc.partial), False
        fac[exc.cofactor] = 1
    m = math.prod(q for q, e in fac.items() if e % 2)
    return (m if n > 0 else -m), complete


def build_field(P: RationalPoint, C: CurveParams, **factor_opts) -> BiquadField:
    if P.inf or not on_curve(P, C):
        raise DomainError(f"{P} is not an affine point of E_{C.p}")
    if is_torsion(P, C):
        raise DomainError(f"{P} is torsion; no field is attached")
    D = field_discriminant_term(P, C)
    if D == 0 or is_perfect_square(D):
        raise DomainError(f"r - 21pt^2 = {D} is zero or a square; K is not biquadratic")
    d1 = 3 * C.p
    if is_perfect_square(d1 * D):
        raise DomainError(f"r - 21pt^2 = {D} lies in the class of 3p; K is not biquadratic")
    factor_opts.setdefault("rho_budget", 200_000)
    d2, complete = _squarefree_or_partial(D, factor_opts)
    return BiquadField(d1, d2, class_mul(d1, d2), D > 0, complete)


def same_field(D: int, E: int, d1: int) -> bool:
    """Whether Q(sqrt d1, sqrt D) = Q(sqrt d1, sqrt E), tested without factoring."""
    return is_perfect_square(D * E) or is_perfect_square(d1 * D * E)


@dataclass(frozen=True)
class AlphaCertificate:
    r: int
    t: int
    s: int
    alpha_form: tuple[int, int]  # (u, v): m * alpha = u + v sqrt(3p)
    checks: dict = field(compare=False)
    congruence_class: int  # s mod 4
    adjustment: int  # m

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k in CHECKS if not self.checks[k]]


def alpha_certificate(P: RationalPoint, C: CurveParams, strict: bool = True) -> AlphaCertificate:
    """Evaluate every hypothesis for alpha = s + t^3 sqrt(972 p^3) = s + 18p t^3 sqrt(3p).

    With ``strict`` the first failed check is raised as a CertificateError.
    """
    if P.inf or not on_curve(P, C):
        raise DomainError(f"{P} is not an affine point of E_{C.p}")
    r, t, s = P.r, P.t, P.s
    D = field_discriminant_term(P, C)
    checks = {
        "t_even": t % 2 == 0,
        "gcd_s_3p": math.gcd(s, 3 * C.p) == 1,
        "norm_identity": s * s - C.a6 * t**6 == r * r * D,
    }
    s4 = s % 4
    if s4 == 1:
        m = 1
    elif s4 == 3:
        m = -1 if D < 0 else 3
    else:
        m = 0  # s even: only reachable when t_even already fails
    cert = AlphaCertificate(r, t, s, (m * s, m * 18 * C.p * t**3), checks, s4, m)
    if strict:
        for name in CHECKS:
            if not checks[name]:
                raise CertificateError(name, f"point ({r}, {t}, {s}) on E_{C.p}")
    return cert


@dataclass(frozen=True)
class FamilyLevel:
    level: int
    point: RationalPoint
    field: BiquadField
    certificate: AlphaCertificate
    radicand: int  # r - 21pt^2


def double_family(P0: RationalPoint, C: CurveParams, depth: int, **factor_opts) -> list[FamilyLevel]:
    """Levels P_i = 2^i P0 for i = 0..depth, each certified, fields pairwise distinct."""
    if depth < 0:
        raise DomainError("depth must be >= 0")
    out: list[FamilyLevel] = []
    P = P0
    for i in range(depth + 1):
        if i:
            P = double_point(P, C)
        try:
            cert = alpha_certificate(P, C)
            K = build_field(P, C, **factor_opts)
        except CertificateError as exc:
            raise CertificateError(exc.check, exc.detail, level=i) from None
        D = field_discriminant_term(P, C)
        for prev in out:
            if same_field(D, prev.radicand, K.d1):
                raise CertificateError("distinct_fields", f"K_{i} equals K_{prev.level}", level=i)
        out.append(FamilyLevel(i, P, K, cert, D))
    return out
