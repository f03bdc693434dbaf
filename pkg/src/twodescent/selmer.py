"""Assemble Sel_2(E_p/Q) from coset-by-coset local verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .arith import DomainError
from .curve import CurveParams, TheoremClass, is_torsion, on_curve
from .descent import SelmerPair, coset, cosets, phi, torsion_image
from .localsolve import (
    REAL,
    HomSpace,
    LocalVerdict,
    Rule,
    analytic_filters,
    decide_local,
    places,
    reduce_by_coset_parity,
    verdict_real,
)

__all__ = [
    "SolverMode",
    "CosetTrace",
    "SelmerGroup",
    "RankBounds",
    "compute_selmer",
    "rank_bounds",
    "sha_two_bound",
    "pair_bits",
    "f2_rank",
]


class SolverMode(str, enum.Enum):
    FILTERS_PLUS_DECIDE = "filters"
    DECIDE_ONLY = "decide"
    BOTH = "both"


@dataclass(frozen=True)
class CosetTrace:
    representative: SelmerPair
    evaluated: SelmerPair  # coset member actually tested
    in_selmer: bool | None
    place: int | None  # place that excluded the coset, if any
    rule: Rule  # excluding rule, or HENSEL_WITNESS / UNDECIDED
    verdicts: tuple[LocalVerdict, ...]


@dataclass(frozen=True)
class SelmerGroup:
    p: int
    elements: frozenset
    rank_s: int | None  # None when some coset stayed undecided
    trace: tuple[CosetTrace, ...]
    status: str  # "complete" or "incomplete"
    theorem_class: TheoremClass
    mode: SolverMode
    torsion: tuple[SelmerPair, ...]

    def __contains__(self, pair) -> bool:
        return SelmerPair(*pair) in self.elements

    def sorted_elements(self) -> list[SelmerPair]:
        """Each surviving coset in trace order, listed as rep * A in the order of A."""
        return [c for tr in self.trace if tr.in_selmer for c in coset(tr.representative, self.torsion)]

    @property
    def undecided(self) -> list[SelmerPair]:
        return [tr.representative for tr in self.trace if tr.in_selmer is None]


def _evaluate(H: HomSpace, use_filters: bool) -> tuple[bool | None, int | None, Rule, list[LocalVerdict]]:
    """Short-circuit over the places of S: stop at the first refutation."""
    verdicts: list[LocalVerdict] = []
    order = places(H.p)
    if use_filters:
        # all filters first; they are cheap and most cosets die here
        for l in order:
            v = verdict_real(H) if l == REAL else analytic_filters(H, l)
            if v is not None and v.solvable is False:
                return False, l, v.rule, [v]
    pending = False
    for l in order:
        v = verdict_real(H) if l == REAL else decide_local(H, l)
        verdicts.append(v)
        if v.solvable is False:
            return False, l, v.rule, verdicts
        if v.solvable is None:
            pending = True
    if pending:
        return None, None, Rule.UNDECIDED, verdicts
    return True, None, Rule.HENSEL_WITNESS, verdicts


def _run(C: CurveParams, use_filters: bool) -> SelmerGroup:
    A = torsion_image(C)
    elements: set[SelmerPair] = set()
    trace = []
    for rep in cosets(C, A):
        H = HomSpace(rep, C.p)
        if use_filters:
            H = reduce_by_coset_parity(H, A)
        ok, place, rule, verdicts = _evaluate(H, use_filters)
        trace.append(CosetTrace(rep, H.pair, ok, place, rule, tuple(verdicts)))
        if ok:
            elements.update(coset(rep, A))
    complete = all(tr.in_selmer is not None for tr in trace)
    rank = None
    if complete:
        n = len(elements)
        if n < 4 or n & (n - 1):
            raise AssertionError(f"Selmer set for p={C.p} has {n} elements, not a power of 2 >= 4")
        rank = n.bit_length() - 1 - 2
    mode = SolverMode.FILTERS_PLUS_DECIDE if use_filters else SolverMode.DECIDE_ONLY
    return SelmerGroup(
        C.p,
        frozenset(elements),
        rank,
        tuple(trace),
        "complete" if complete else "incomplete",
        C.theorem_class,
        mode,
        A,
    )


def compute_selmer(C: CurveParams, mode: SolverMode | str = SolverMode.FILTERS_PLUS_DECIDE) -> SelmerGroup:
    """Sel_2(E_p/Q) with every member listed, plus a per-coset trace.

    Outside the two residue-class families the analytic filters are still
    sound (they are Legendre-symbol conditions valid for every p), so the
    default mode is used everywhere; ``theorem_class`` flags the situation.
    """
    mode = SolverMode(mode)
    if mode is SolverMode.BOTH:
        fast = _run(C, True)
        slow = _run(C, False)
        if fast.status == slow.status == "complete" and fast.elements != slow.elements:
            raise AssertionError(
                f"modes disagree for p={C.p}: {sorted(fast.elements ^ slow.elements)}"
            )
        return SelmerGroup(
            fast.p, fast.elements, fast.rank_s, fast.trace, fast.status, fast.theorem_class, SolverMode.BOTH, fast.torsion
        )
    return _run(C, mode is SolverMode.FILTERS_PLUS_DECIDE)


# ---------------------------------------------------------------- rank bounds


def pair_bits(pair: SelmerPair, p: int) -> int:
    """Coordinates of a pair over F_2 in the basis -1, 2, 3, 5, p (b1 then b2)."""
    out = 0
    for k, b in enumerate(pair):
        for i, q in enumerate((-1, 2, 3, 5, p)):
            hit = b < 0 if q == -1 else b % q == 0
            if hit:
                out |= 1 << (5 * k + i)
    return out


def f2_rank(vectors) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)  # distinct leading bits, reduced top-down
    return len(basis)


@dataclass(frozen=True)
class RankBounds:
    lower: int
    upper: int | None

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.lower > self.upper):
            raise AssertionError(f"inconsistent rank bounds {self.lower} > {self.upper}")


def _lower_bound(C: CurveParams, known_points) -> int:
    """dim of <phi(points), A> minus 2, and at least 1 if any point has infinite order."""
    vecs = [pair_bits(a, C.p) for a in torsion_image(C)]
    nontorsion = False
    for P in known_points:
        if not on_curve(P, C):
            raise DomainError(f"{P} is not on E_{C.p}")
        vecs.append(pair_bits(phi(P, C), C.p))
        nontorsion |= not is_torsion(P, C)
    return max(f2_rank(vecs) - 2, int(nontorsion))


def rank_bounds(C: CurveParams, known_points=(), selmer: SelmerGroup | None = None) -> RankBounds:
    lower = _lower_bound(C, known_points)
    G = selmer or compute_selmer(C)
    return RankBounds(lower, G.rank_s)


def sha_two_bound(C: CurveParams, known_points=(), selmer: SelmerGroup | None = None) -> int | None:
    """Upper bound on dim_F2 Sha[2]: Selmer rank minus the certified rank lower bound."""
    rb = rank_bounds(C, known_points, selmer)
    return None if rb.upper is None else rb.upper - rb.lower
