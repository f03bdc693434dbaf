"""Command-line front end: ``twodescent <command> [options]``.

Exit codes: 0 success, 1 assertion failure, 2 usage error, 3 undecided local verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .arith import DomainError, is_prime
from .classnum import biquad_estimate
from .curve import CurveParams, RationalPoint, TheoremClass, make_curve, on_curve
from .descent import SelmerPair, in_QS2, phi
from .fieldcraft import CertificateError, double_family
from .localsolve import REAL, HomSpace, LocalVerdict, decide_local, places, verdict_all_places, verdict_real
from .oracle import brute_decide, cross_check_filters
from .selmer import SolverMode, compute_selmer, rank_bounds, sha_two_bound

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3

PREDICTED_RANK = {TheoremClass.SELMER_ONE: 1, TheoremClass.SELMER_ZERO: 0}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- encoding


def enc(x):
    """JSON-safe form: integers and rationals become decimal strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, str):  # includes str-valued enums
        return x.value if hasattr(x, "value") else x
    if isinstance(x, dict):
        return {str(k): enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [enc(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def place_name(l: int) -> str:
    return "inf" if l == REAL else str(l)


def verdict_dict(v: LocalVerdict) -> dict:
    out = {
        "place": place_name(v.place),
        "solvable": v.solvable,
        "rule": v.rule.value,
    }
    if v.witness is not None:
        out["witness"] = list(v.witness.z)
        out["precision"] = v.witness.precision
    if v.refutation_depth is not None:
        out["refutation_depth"] = v.refutation_depth
    return out


def curve_dict(C: CurveParams) -> dict:
    return {"p": C.p, "roots": list(C.roots), "a2": C.a2, "a6": C.a6, "class": C.theorem_class.value}


# ---------------------------------------------------------------- parsing helpers


def parse_ints(text: str, n: int, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be {n} comma-separated integers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what} must be {n} comma-separated integers, got {text!r}")
    return vals


def need_curve(args) -> CurveParams:
    if args.p is None:
        raise UsageError(f"command {args.command!r} needs -p")
    try:
        return make_curve(args.p)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def need_point(args, C: CurveParams) -> RationalPoint:
    if args.point is None:
        raise UsageError(f"command {args.command!r} needs --point r,t,s")
    r, t, s = parse_ints(args.point, 3, "--point")
    try:
        P = RationalPoint(r, t, s)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if not on_curve(P, C):
        raise UsageError(f"({r}, {t}, {s}) is not on E_{C.p}")
    return P


def need_pair(args, C: CurveParams) -> SelmerPair:
    if args.pair is None:
        raise UsageError(f"command {args.command!r} needs --pair b1,b2")
    pr = SelmerPair(*parse_ints(args.pair, 2, "--pair"))
    if not (in_QS2(pr.b1, C) and in_QS2(pr.b2, C)):
        raise UsageError(f"{pr} is not a pair of squarefree classes supported on -1, 2, 3, 5, {C.p}")
    return pr


# ---------------------------------------------------------------- commands
#
# Each returns (exit code, result dict, trace list, table lines).


def cmd_rank(args):
    C = need_curve(args)
    G = compute_selmer(C, args.mode)
    code = EXIT_OK
    notes = []
    if G.status != "complete":
        code = EXIT_UNDECIDED
        notes.append(f"undecided cosets: {', '.join(map(str, G.undecided))}")
    elif C.theorem_class in PREDICTED_RANK and G.rank_s != PREDICTED_RANK[C.theorem_class]:
        code = EXIT_ASSERT
        notes.append(f"predicted rank {PREDICTED_RANK[C.theorem_class]}, got {G.rank_s}")
    spot = []
    if args.spot_check_places:
        for tr in G.trace:
            if tr.in_selmer:
                H = HomSpace(tr.evaluated, C.p)
                extra = verdict_all_places(H, spot_check_places=args.spot_check_places)[len(places(C.p)):]
                spot.append({"pair": tr.evaluated, "verdicts": [verdict_dict(v) for v in extra]})
                if not all(v.solvable for v in extra):
                    code = max(code, EXIT_ASSERT)
                    notes.append(f"spot check failed for {tr.evaluated}")
    result = {
        "rank_s": G.rank_s,
        "status": G.status,
        "mode": G.mode.value,
        "order": len(G.elements),
        "elements": list(G.sorted_elements()),
    }
    if spot:
        result["spot_checks"] = spot
    trace = [
        {
            "coset": tr.representative,
            "tested": tr.evaluated,
            "in_selmer": tr.in_selmer,
            "place": None if tr.place is None else place_name(tr.place),
            "rule": tr.rule.value,
            "verdicts": [verdict_dict(v) for v in tr.verdicts] if tr.in_selmer is not False else [],
        }
        for tr in G.trace
    ]
    lines = [
        f"E_{C.p}: 2-Selmer rank s = {G.rank_s} ({G.status}, class {C.theorem_class.value})",
        f"Sel_2 has {len(G.elements)} elements:",
        "  " + " ".join(str(e) for e in G.sorted_elements()),
        "coset trace:",
    ]
    for tr in G.trace:
        where = "" if tr.place is None else f" at {place_name(tr.place)}"
        state = {True: "in", False: "out", None: "??"}[tr.in_selmer]
        lines.append(f"  {str(tr.representative):>16} {state:>3}  {tr.rule.value}{where}")
    return code, result, trace, lines + notes


def cmd_local(args):
    C = need_curve(args)
    pr = need_pair(args, C)
    H = HomSpace(pr, C.p)
    verdicts = []
    for l in places(C.p):
        if l == REAL:
            verdicts.append(verdict_real(H))
        else:
            verdicts.append(decide_local(H, l, depth_limit=args.depth))
    extra = verdict_all_places(H, spot_check_places=args.spot_check_places)[len(places(C.p)):]
    verdicts += extra
    solv = [v.solvable for v in verdicts]
    code = EXIT_UNDECIDED if None in solv and False not in solv else EXIT_OK
    everywhere = False if False in solv else (None if None in solv else True)
    result = {"pair": pr, "everywhere_locally_solvable": everywhere}
    lines = [f"{pr} on E_{C.p}: everywhere locally solvable = {everywhere}"]
    for v in verdicts:
        w = "" if v.witness is None else f"  z = ({', '.join(str(z) for z in v.witness.z)})"
        lines.append(f"  {place_name(v.place):>4}: {str(v.solvable):5} {v.rule.value}{w}")
    return code, result, [verdict_dict(v) for v in verdicts], lines


def cmd_descend(args):
    C = need_curve(args)
    P = need_point(args, C)
    G = compute_selmer(C, args.mode)
    img = phi(P, C)
    rb = rank_bounds(C, [P], G)
    sha = sha_two_bound(C, [P], G)
    inside = img in G
    code = EXIT_OK if inside else EXIT_ASSERT
    if G.status != "complete":
        code = EXIT_UNDECIDED
    result = {
        "point": [P.r, P.t, P.s],
        "phi": img,
        "in_selmer": inside,
        "rank_lower": rb.lower,
        "rank_upper": rb.upper,
        "sha2_dim_bound": sha,
    }
    lines = [
        f"P = {P} on E_{C.p}",
        f"phi(P) = {img}  in Sel_2: {inside}",
        f"{rb.lower} <= rank E_{C.p}(Q) <= {rb.upper};  dim Sha[2] <= {sha}",
    ]
    return code, result, [], lines


def _family_levels(args):
    C = need_curve(args)
    P = need_point(args, C)
    if args.depth is not None and args.depth < 0:
        raise UsageError("--depth must be >= 0")
    return C, double_family(P, C, args.depth or 0)


def _estimate(K):
    """biquad_estimate, or (None, reason) when K is beyond desk scale."""
    try:
        return biquad_estimate(K), None
    except DomainError as exc:
        return None, str(exc)


def cmd_family(args):
    C, fam = _family_levels(args)
    levels, lines = [], []
    code = EXIT_OK
    for L in fam:
        K, cert = L.field, L.certificate
        entry = {
            "level": L.level,
            "point": [L.point.r, L.point.t, L.point.s],
            "d1": K.d1,
            "d2": K.d2,
            "d3": K.d3,
            "real": K.real,
            "factorization_complete": K.factorization_complete,
            "checks": cert.checks,
            "s_mod_4": cert.congruence_class,
            "adjustment": cert.adjustment,
            "alpha": list(cert.alpha_form),
        }
        lines.append(
            f"K_{L.level} = Q(sqrt {K.d1}, sqrt {K.d2}){'' if K.factorization_complete else ' [d2 partly factored]'}"
            f"  real={K.real}  m={cert.adjustment}  checks: "
            + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in cert.checks.items())
        )
        if args.audit:
            est, why = _estimate(K)
            if est is not None:
                entry["audit"] = {
                    "h": [est.h1, est.h2, est.h3],
                    "candidates": list(est.candidates),
                    "parity_even_certain": est.parity_even_certain,
                }
                lines.append(f"    h = {est.h1}, {est.h2}, {est.h3}; h(K) candidates {list(est.candidates)}")
            else:
                entry["audit"] = {"skipped": why}
                lines.append(f"    audit skipped: {why}")
        levels.append(entry)
    return code, {"levels": levels}, [], lines


def cmd_audit(args):
    C, fam = _family_levels(args)
    code = EXIT_OK
    rows, lines = [], []
    for L in fam:
        K = L.field
        est, why = _estimate(K)
        if est is None:
            rows.append({"level": L.level, "skipped": why})
            lines.append(f"K_{L.level}: skipped, {why}")
            if args.expect is not None and L.level == 0:
                code = EXIT_ASSERT
            continue
        row = {
            "level": L.level,
            "d": [K.d1, K.d2, K.d3],
            "h": [est.h1, est.h2, est.h3],
            "real": K.real,
            "candidates": list(est.candidates),
            "parity_even_certain": est.parity_even_certain,
        }
        lines.append(
            f"K_{L.level} = Q(sqrt {K.d1}, sqrt {K.d2}): h = {est.h1}, {est.h2}, {est.h3}; "
            f"candidates {list(est.candidates)}; all even: {est.parity_even_certain}"
        )
        if args.expect is not None and L.level == 0:
            row["expected"] = args.expect
            row["expected_in_candidates"] = args.expect in est.candidates
            lines.append(f"  expected h(K) = {args.expect} in candidates: {args.expect in est.candidates}")
            if args.expect not in est.candidates:
                code = EXIT_ASSERT
        if not est.parity_even_certain:
            code = EXIT_ASSERT
        rows.append(row)
    return code, {"levels": rows}, [], lines


def _primes_in_class(residue: int, count: int) -> list[int]:
    out, n = [], residue
    while len(out) < count:
        if n > 5 and is_prime(n):
            out.append(n)
        n += 120
    return out


def cmd_scan(args):
    if not args.classes:
        raise UsageError("scan needs --classes a,b,...")
    try:
        classes = [int(c) for c in args.classes.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"bad --classes {args.classes!r}") from None
    if not classes:
        raise UsageError("scan needs a nonempty --classes list")
    if args.count is None or args.count < 1:
        raise UsageError("--count must be >= 1")
    code = EXIT_OK
    rows, lines = [], []
    for cls in classes:
        if cls % 2 == 0 or cls % 3 == 0 or cls % 5 == 0:
            raise UsageError(f"residue {cls} mod 120 contains no primes > 5")
        for p in _primes_in_class(cls % 120, args.count):
            C = make_curve(p)
            G = compute_selmer(C, args.mode)
            pred = PREDICTED_RANK.get(C.theorem_class)
            ok = G.status == "complete" and (pred is None or G.rank_s == pred)
            if G.status != "complete":
                code = max(code, EXIT_UNDECIDED)
            elif not ok:
                code = EXIT_ASSERT
            rows.append({"p": p, "class": C.theorem_class.value, "rank_s": G.rank_s, "predicted": pred, "ok": ok})
            lines.append(f"p = {p:>6}  s = {G.rank_s}  predicted {pred}  {'ok' if ok else 'MISMATCH'}")
    return code, {"primes": rows}, [], lines


def cmd_oracle(args):
    C = need_curve(args)
    if args.pair is not None:
        pr = need_pair(args, C)
        H = HomSpace(pr, C.p)
        reps = [(l, brute_decide(H, l)) for l in places(C.p)]
        code = EXIT_UNDECIDED if any(r.verdict is None for _, r in reps) else EXIT_OK
        rows = [
            {"place": place_name(l), "status": r.status, "bound": r.bound, "found": r.found, "note": r.note}
            for l, r in reps
        ]
        lines = [f"{pr} brute-force residue search on E_{C.p}:"]
        lines += [f"  {place_name(l):>4}: {r.status} (k={r.bound}) {r.found or ''} {r.note}" for l, r in reps]
        return code, {"pair": pr, "places": rows}, [], lines
    rep = cross_check_filters(C)
    code = EXIT_OK if rep.ok else (EXIT_ASSERT if rep.disagreements or rep.nonuniform_cosets else EXIT_UNDECIDED)
    result = {
        "checked": rep.checked,
        "filter_hits": rep.filter_hits,
        "disagreements": [[d[0], place_name(d[1]), *d[2:]] for d in rep.disagreements],
        "undecided": [[u[0], place_name(u[1]), u[2], u[3]] for u in rep.undecided],
        "nonuniform_cosets": [[c, place_name(l)] for c, l in rep.nonuniform_cosets],
    }
    lines = [
        f"cross-check on E_{C.p}: {rep.checked} (pair, place) checks, {rep.filter_hits} filter verdicts",
        f"  disagreements {len(rep.disagreements)}, undecided {len(rep.undecided)}, "
        f"non-uniform cosets {len(rep.nonuniform_cosets)}",
    ]
    return code, result, [], lines


COMMANDS = {
    "rank": cmd_rank,
    "local": cmd_local,
    "descend": cmd_descend,
    "family": cmd_family,
    "scan": cmd_scan,
    "audit": cmd_audit,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twodescent", description="2-descent on y^2 = (x+6p)(x-9p)(x-18p)")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("-p", type=int, default=None, help="the prime p")
        sp.add_argument("--pair", default=None, help="b1,b2")
        sp.add_argument("--point", default=None, help="r,t,s for the point (r/t^2, s/t^3)")
        sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("--mode", choices=[m.value for m in SolverMode], default=SolverMode.FILTERS_PLUS_DECIDE.value)
        sp.add_argument("--format", choices=["table", "json"], default="table")
        sp.add_argument("--classes", default=None, help="residues mod 120, e.g. 17,113")
        sp.add_argument("--count", type=int, default=None)
        sp.add_argument("--spot-check-places", type=int, default=0)
        sp.add_argument("--audit", action="store_true", help="family: add the class-number audit")
        sp.add_argument("--expect", type=int, default=None, help="audit: h(K) that must be a candidate")
    return ap


def render(args, C: CurveParams | None, result, trace) -> str:
    doc = {
        "version": __version__,
        "command": args.command,
        "curve": curve_dict(C) if C is not None else None,
        "result": result,
        "trace": trace,
    }
    return json.dumps(enc(doc), indent=2)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        code, result, trace, lines = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"twodescent {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"twodescent {args.command}: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except DomainError as exc:
        print(f"twodescent {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"twodescent {args.command}: assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    if args.format == "json":
        C = make_curve(args.p) if args.p is not None else None
        print(render(args, C, result, trace))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
