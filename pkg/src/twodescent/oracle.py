"""Brute-force counterparts to the analytic shortcuts.

``brute_local`` works projectively: it enumerates every primitive residue
vector (z0, z1, z2, z3) mod l^k of

    b1 z1^2 - b2 z2^2 = 15p z0^2,    b1 z1^2 - b1 b2 z3^2 = 24p z0^2

and certifies a survivor with the two-variable Hensel condition
min v(F_i) > 2 v(2x2 Jacobian minor).  It shares no code with the ball
search in ``localsolve``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import is_perfect_square
from .curve import CurveParams, RationalPoint, on_curve
from .descent import SelmerPair, all_pairs, coset, coset_reduce, torsion_image
from .localsolve import REAL, HomSpace, analytic_filters, decide_local, places

__all__ = [
    "SearchReport",
    "brute_local",
    "brute_decide",
    "point_search",
    "cross_check_filters",
    "CrossCheckReport",
]

_NOVAL = 10_000  # stands in for v(0)
_MAX_MODULUS = 8_000_000


@dataclass
class SearchReport:
    target: str
    bound: int
    status: str  # "found", "empty", "inconclusive", "skipped"
    found: tuple | None = None  # (z0, z1, z2, z3) residues, when status == "found"
    elapsed_units: int = 0
    note: str = ""

    @property
    def verdict(self) -> bool | None:
        return {"found": True, "empty": False}.get(self.status)


def _vals(x: np.ndarray, l: int, cap: int) -> np.ndarray:
    """Vectorized l-adic valuation, capped; zeros map to _NOVAL."""
    x = np.abs(x.astype(np.int64))
    out = np.zeros(x.shape, dtype=np.int64)
    live = x != 0
    y = x.copy()
    for _ in range(cap):
        div = live & (y % l == 0)
        if not div.any():
            break
        out[div] += 1
        y[div] //= l
    out[~live] = _NOVAL
    return out


def _progression_vals(n: int, e: int, l: int, k: int) -> np.ndarray:
    """Valuations of 0, l^e, 2 l^e, ... (n terms), with 0 counted as depth k."""
    v = np.full(n, e, dtype=np.int64)
    step = 1
    for _ in range(k - e):
        v[::step * l] += 1
        step *= l
    return v


def _root_table(c: int, xs: np.ndarray, m: int, l: int, k: int) -> np.ndarray:
    """table[v] = an x in xs with c x^2 = v (mod m), least valuation first; -1 if none."""
    table = np.full(m, -1, dtype=np.int64)
    vals = (c % m) * (xs * xs % m) % m
    v = _progression_vals(len(xs), 0 if len(xs) == m else 1, l, k)  # xs is range(0, m, l^e)
    # write strata from the deepest valuation up, so the least valuation lands last
    for level in range(k, -1, -1):
        sel = v == level
        table[vals[sel]] = xs[sel]
    return table


def _real_search(H: HomSpace) -> SearchReport:
    if H.b1 < 0:
        return SearchReport(f"{H.pair} at inf", 0, "empty", note="b1 < 0: sign obstruction")
    hi = math.isqrt(H.rhs2) + 2
    for z1 in range(0, hi + 1):
        t2 = Fraction(H.b1 * z1 * z1 - H.rhs1, H.b2)
        t3 = Fraction(H.b1 * z1 * z1 - H.rhs2, H.b1 * H.b2)
        if t2 >= 0 and t3 >= 0:
            return SearchReport(f"{H.pair} at inf", 0, "found", (1, z1, None, None), z1 + 1)
    return SearchReport(f"{H.pair} at inf", 0, "inconclusive", elapsed_units=hi + 1)


def brute_local(H: HomSpace, l: int, k: int) -> SearchReport:
    """Exhaustive primitive residue search modulo l^k."""
    if l == REAL:
        return _real_search(H)
    if k < 1:
        raise ValueError("k must be >= 1")
    m = l**k
    target = f"{H.pair} at {l}"
    if m > _MAX_MODULUS:
        return SearchReport(target, k, "inconclusive", note="modulus too large")
    b1, b2 = H.b1, H.b2
    c15, c24 = H.rhs1, H.rhs2
    B1, B2, B12, C15, C24 = (c % m for c in (b1, b2, b1 * b2, c15, c24))
    full = np.arange(m, dtype=np.int64)
    mult = np.arange(0, m, l, dtype=np.int64)
    sq_full = full * full % m
    sq_mult = mult * mult % m
    t1_mult = _root_table(b1, mult, m, l, k)
    t2_all = _root_table(b2, full, m, l, k)
    t2_mult = _root_table(b2, mult, m, l, k)
    t3_all = _root_table(b1 * b2, full, m, l, k)

    # Each chart fixes one coordinate to 1 and forces the earlier ones into lZ.
    # The equations see z1 only through z1^2, so any root of b1 z1^2 = c works.
    rows = []
    # z0 = 1
    u = B1 * sq_full % m
    rows.append((np.ones_like(full), full, t2_all[(u - C15) % m], t3_all[(u - C24) % m]))
    # z0 in lZ, z1 = 1
    rows.append((mult, np.ones_like(mult), t2_all[(B1 - C15 * sq_mult) % m], t3_all[(B1 - C24 * sq_mult) % m]))
    # z0, z1 in lZ, z2 = 1
    z1 = t1_mult[(B2 + C15 * sq_mult) % m]
    u = B1 * (z1 * z1 % m) % m
    rows.append((mult, z1, np.ones_like(mult), t3_all[(u - C24 * sq_mult) % m]))
    # z0, z1, z2 in lZ, z3 = 1
    z1 = t1_mult[(B12 + C24 * sq_mult) % m]
    u = B1 * (z1 * z1 % m) % m
    rows.append((mult, z1, t2_mult[(u - C15 * sq_mult) % m], np.ones_like(mult)))
    cost = len(full) + 3 * len(mult)

    z = np.concatenate([np.stack(r, axis=1) for r in rows])
    z = z[(z >= 0).all(axis=1)]
    if len(z) == 0:
        return SearchReport(target, k, "empty", elapsed_units=cost)

    # exact integer arithmetic on the (few) survivors
    for z0, z1, z2, z3 in z.tolist():
        F1 = b1 * z1 * z1 - b2 * z2 * z2 - c15 * z0 * z0
        F2 = b1 * z1 * z1 - b1 * b2 * z3 * z3 - c24 * z0 * z0
        g1 = (-2 * c15 * z0, 2 * b1 * z1, -2 * b2 * z2, 0)
        g2 = (-2 * c24 * z0, 2 * b1 * z1, 0, -2 * b1 * b2 * z3)
        minors = [g1[i] * g2[j] - g1[j] * g2[i] for i in range(4) for j in range(i + 1, 4)]
        vmin = min((_val(x, l) for x in minors if x), default=None)
        if vmin is None:
            continue
        vF = min(_val(F, l) if F else _NOVAL for F in (F1, F2))
        if vF > 2 * vmin:
            return SearchReport(target, k, "found", (z0, z1, z2, z3), cost)
    return SearchReport(target, k, "inconclusive", elapsed_units=cost, note=f"{len(z)} uncertified residues")


def _val(x: int, l: int) -> int:
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


def brute_decide(H: HomSpace, l: int, k_start: int = 1, k_max: int = 64) -> SearchReport:
    """Raise the depth until brute_local is conclusive (or the modulus cap is hit)."""
    rep = None
    for k in range(k_start, k_max + 1):
        rep = brute_local(H, l, k)
        if rep.status != "inconclusive" or rep.note == "modulus too large" or l == REAL:
            return rep
    return rep


def point_search(C: CurveParams, height_bound: int, ts=(1, 2, 4, 8)) -> list[RationalPoint]:
    """Affine points (r/t^2, s/t^3) with |r| <= height_bound and t in ts."""
    out = []
    for t in ts:
        t2 = t * t
        c2, c6 = C.a2 * t2, C.a6 * t2**3
        for r in range(-height_bound, height_bound + 1):
            if math.gcd(r, t) != 1:
                continue
            rhs = r * r * (r + c2) + c6
            if rhs < 0 or not is_perfect_square(rhs):
                continue
            s = math.isqrt(rhs)
            if math.gcd(s, t) != 1:
                continue
            for ss in {s, -s}:
                P = RationalPoint(r, t, ss)
                assert on_curve(P, C)
                out.append(P)
    return out


@dataclass
class CrossCheckReport:
    p: int
    checked: int = 0
    filter_hits: int = 0
    disagreements: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    nonuniform_cosets: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.disagreements or self.undecided or self.nonuniform_cosets)


def cross_check_filters(C: CurveParams, pairs=None, place_list=None) -> CrossCheckReport:
    """Compare analytic filters, decide_local and brute_local on every pair and place."""
    t0 = time.perf_counter()
    A = torsion_image(C)
    pairs = list(pairs) if pairs is not None else all_pairs(C)
    place_list = place_list or places(C.p)
    rep = CrossCheckReport(C.p)
    brute: dict[tuple[SelmerPair, int], bool | None] = {}
    for pr in pairs:
        H = HomSpace(pr, C.p)
        for l in place_list:
            rep.checked += 1
            b = brute_decide(H, l).verdict
            brute[pr, l] = b
            d = decide_local(H, l).solvable
            f = analytic_filters(H, l)
            if b is None or d is None:
                rep.undecided.append((pr, l, b, d))
                continue
            if d != b:
                rep.disagreements.append((pr, l, "decide", d, b))
            if f is not None:
                rep.filter_hits += 1
                if f.solvable != b:
                    rep.disagreements.append((pr, l, f.rule.value, f.solvable, b))
    pairset = set(pairs)
    for rep_pair in {coset_reduce(pr, A) for pr in pairs}:
        members = [c for c in coset(rep_pair, A) if c in pairset]
        for l in place_list:
            if len({brute[c, l] for c in members}) > 1:
                rep.nonuniform_cosets.append((rep_pair, l))
    rep.seconds = time.perf_counter() - t0
    return rep
