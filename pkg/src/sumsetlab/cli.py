"""Command-line front end.

Exit codes:
  0  success
  1  a check or verification failed (lemma-check violation, --verify mismatch)
  2  usage or input parse error
  3  element cap exceeded
  4  unsupported vanishing-polynomial degree
  5  a hypothesis of the requested algorithm does not hold
  6  a randomized or staged procedure gave up (retries, stages, step budget)
  7  any other library error (degenerate or empty input, ...)
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import (
    CapExceeded,
    HypothesisViolated,
    ParseError,
    RetriesExhausted,
    StageFailed,
    StepBudgetExhausted,
    SumsetLabError,
    UnsupportedDegree,
)
from .io import parse_rational, read_graph, read_set
from .setcalc import (
    NumberSet,
    additive_energy,
    default_cap,
    difference_set,
    format_rational,
    hfold_sum,
    product_set,
    quotient_set,
    sumset,
)

SCHEMA = "sumsetlab/1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_DEGREE = 4
EXIT_HYPOTHESIS = 5
EXIT_GAVE_UP = 6
EXIT_ERROR = 7


class UsageError(Exception):
    pass


def emit(payload: dict, out) -> None:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    doc = {"schema": SCHEMA, **payload}
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _fr_list(A) -> list[str]:
    return [format_rational(x) for x in A]


def _cap(args) -> int:
    cap = args.cap if args.cap is not None else default_cap()
    if cap < 1:
        raise UsageError("cap must be positive")
    return cap


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON document: {exc}", source=path) from None


def _strip_schema(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "schema"}


# -- calc -------------------------------------------------------------------------------------

def cmd_calc(args, out) -> int:
    cap = _cap(args)
    op = args.op
    if op == "hfold":
        if args.set is None or args.h is None:
            raise UsageError("hfold needs --set and --h")
        if args.h < 1:
            raise UsageError("--h must be positive")
        A = read_set(args.set)
        result = hfold_sum(A, args.h, cap)
    else:
        if args.a is None or args.b is None:
            raise UsageError(f"{op} needs --a and --b")
        A, B = read_set(args.a), read_set(args.b)
        if op == "energy":
            value = additive_energy(A, B)
            if args.format == "json":
                emit({"command": "calc", "op": op, "energy": value}, out)
            else:
                out.write(f"{value}\n")
            return EXIT_OK
        fn = {"sum": sumset, "diff": difference_set, "prod": product_set, "quot": quotient_set}[op]
        result = fn(A, B, cap)
    if args.format == "json":
        payload = {"command": "calc", "op": op, "size": len(result)}
        if args.elements:
            payload["elements"] = _fr_list(result)
        emit(payload, out)
    else:
        out.write(f"size={len(result)}\n")
        if args.elements:
            out.write(" ".join(_fr_list(result)) + "\n")
    return EXIT_OK


# -- vanish -----------------------------------------------------------------------------------

def cmd_vanish(args, out) -> int:
    from .tarry_escott import construct_vanishing_poly, vanishing_order, vanishing_order_by_derivatives

    p = construct_vanishing_poly(args.k)
    order = vanishing_order(p)
    if order != vanishing_order_by_derivatives(p):
        out.write("order oracles disagree\n")
        return EXIT_VIOLATION
    if args.format == "json":
        emit(
            {
                "command": "vanish",
                "k": args.k,
                "polynomial": str(p),
                "terms": p.term_count,
                "order": order,
                "coefficients": {str(e): c for e, c in p.terms},
            },
            out,
        )
    else:
        out.write(f"{p}, terms={p.term_count}, order={order}\n")
    return EXIT_OK


# -- cover ------------------------------------------------------------------------------------

def cmd_cover(args, out) -> int:
    from .graphkit import CoverOutcome, covering_split, verify_cover_outcome

    X, Y = read_set(args.x), read_set(args.y)
    if args.verify:
        doc = _load_json(args.verify)
        outcome = CoverOutcome.from_json(doc["outcome"])
        ok = verify_cover_outcome(outcome, X, Y)
        emit({"command": "cover", "verified": ok}, out)
        return EXIT_OK if ok else EXIT_VIOLATION
    K = parse_rational(args.K)
    outcome = covering_split(X, Y, K)
    emit(
        {
            "command": "cover",
            "K": format_rational(K),
            "case": outcome.case,
            "outcome": outcome.to_json(),
            "verified": verify_cover_outcome(outcome, X, Y),
        },
        out,
    )
    return EXIT_OK


# -- drc --------------------------------------------------------------------------------------

def cmd_drc(args, out) -> int:
    from .graphkit import BipartiteGraph, drc_feasible, drc_select, verify_drc

    G = read_graph(args.graph)
    if not isinstance(G, BipartiteGraph):
        raise ParseError("drc needs a bipartite graph file (header 'nX nY')", source=args.graph)
    if args.verify:
        doc = _load_json(args.verify)
        ok = verify_drc(G, doc["selected"], doc["r"], doc["m"])
        emit({"command": "drc", "verified": ok}, out)
        return EXIT_OK if ok else EXIT_VIOLATION
    feas = drc_feasible(G, args.t, args.r, args.m, args.a)
    res = drc_select(G, args.t, args.r, args.m, args.a, args.seed, args.max_retries)
    emit(
        {
            "command": "drc",
            "seed": args.seed,
            "t": args.t,
            "r": args.r,
            "m": args.m,
            "a": args.a,
            "feasible": feas.feasible,
            "margin": format_rational(feas.margin),
            "selected": list(res.selected),
            "sample": list(res.sample),
            "attempts": res.attempts,
            "verified": verify_drc(G, res.selected, args.r, args.m),
        },
        out,
    )
    return EXIT_OK


# -- grow -------------------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def cmd_grow(args, out) -> int:
    from .pipeline.growth import growth_experiment

    try:
        report = growth_experiment(args.family, _int_list(args.n), _int_list(args.h), _cap(args), jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        out.write(report.to_csv())
    else:
        emit({"command": "grow", **report.to_json()}, out)
    return EXIT_OK


# -- pipeline ---------------------------------------------------------------------------------

def _pipeline_input(args) -> NumberSet:
    if (args.set is None) == (args.family is None):
        raise UsageError("give exactly one of --set or --family (with --n)")
    if args.set is not None:
        return read_set(args.set)
    from .pipeline.growth import family_set

    if args.n is None:
        raise UsageError("--family needs --n")
    try:
        return family_set(args.family, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _pipeline_payload(args, A: NumberSet) -> dict:
    from .pipeline.iteration import iterate_main
    from .pipeline.proposition import proposition_run

    cap = _cap(args)
    kwargs = {"drc_m": args.drc_m, "drc_r": args.drc_r}
    payload = {
        "command": "pipeline",
        "mode": args.mode,
        "seed": args.seed,
        "k": args.k,
        "ell": args.ell,
        "input": _fr_list(A),
        "drc_m": args.drc_m,
        "drc_r": args.drc_r,
    }
    if args.mode == "prop":
        w = proposition_run(A, args.k, args.ell, seed=args.seed, cap=cap, **kwargs)
        payload["result"] = {"type": type(w).__name__, **w.to_json()}
    else:
        tr = iterate_main(A, args.k, args.ell, args.max_steps, seed=args.seed, cap=cap, **kwargs)
        payload["transcript"] = tr.to_json()
    return payload


def _verify_pipeline_doc(doc: dict, args) -> bool:
    """Rerun with the recorded seed and parameters; also re-verify embedded certificates."""
    from .pipeline.intersection import IntersectionCertificate, verify_certificate

    ns = argparse.Namespace(**vars(args))
    for key in ("mode", "seed", "k", "ell", "drc_m", "drc_r"):
        setattr(ns, key, doc[key])
    A = NumberSet(Fraction(x) for x in doc["input"])
    if _strip_schema(doc) != _pipeline_payload(ns, A):
        return False
    results = [doc["result"]] if "result" in doc else [s["witness"] for s in doc["transcript"]["steps"]]
    current = A
    for res in results:
        if "certificate" in res:
            cert = IntersectionCertificate.from_json(res["certificate"])
            sets = [NumberSet(Fraction(x) for x in S) for S in res["A_sets"]]
            if not verify_certificate(cert, current, sets, res["ell"], res["t"]):
                return False
            current = NumberSet(Fraction(x) for x in res["A_prime"])
    return True


def cmd_pipeline(args, out) -> int:
    if args.verify:
        doc = _load_json(args.verify)
        ok = _verify_pipeline_doc(doc, args)
        emit({"command": "pipeline", "verified": ok}, out)
        return EXIT_OK if ok else EXIT_VIOLATION
    A = _pipeline_input(args)
    emit(_pipeline_payload(args, A), out)
    return EXIT_OK


# -- intersect --------------------------------------------------------------------------------

def cmd_intersect(args, out) -> int:
    from .pipeline.intersection import (
        IntersectionCertificate,
        check_trivial_intersection,
        intersection_algorithm,
        verify_certificate,
    )

    A_sets = [read_set(p) for p in args.sets]
    A = read_set(args.a) if args.a else NumberSet(x for S in A_sets for x in S)
    if args.verify:
        doc = _load_json(args.verify)
        cert = IntersectionCertificate.from_json(doc["certificate"])
        ok = verify_certificate(cert, A, A_sets, args.ell, args.t)
        emit({"command": "intersect", "verified": ok}, out)
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.check_only:
        chk = check_trivial_intersection(A_sets, args.ell, args.t, _cap(args))
        emit(
            {
                "command": "intersect",
                "trivial": chk.trivial,
                "beta": None if chk.beta is None else format_rational(chk.beta),
                "folds": list(chk.folds),
            },
            out,
        )
        return EXIT_OK
    cert = intersection_algorithm(A, A_sets, args.ell, args.t, _cap(args))
    emit(
        {
            "command": "intersect",
            "ell": args.ell,
            "t": args.t,
            "conclusion": cert.conclusion,
            "certificate": cert.to_json(),
            "verified": verify_certificate(cert, A, A_sets, args.ell, args.t),
        },
        out,
    )
    return EXIT_OK


# -- lemma-check ------------------------------------------------------------------------------

def cmd_lemma_check(args, out) -> int:
    from .checks import SUITES, run_suites

    names = ["all"] if args.suite == "all" else args.suite.split(",")
    unknown = [n for n in names if n != "all" and n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from all, {', '.join(SUITES)}")
    results = run_suites(names, seed=args.seed)
    passed = all(r.passed for r in results)
    emit(
        {
            "command": "lemma-check",
            "seed": args.seed,
            "passed": passed,
            "suites": [r.to_json() for r in results],
        },
        out,
    )
    return EXIT_OK if passed else EXIT_VIOLATION


# -- parser -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumsetlab", description="Exact sumset and sum-product laboratory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("text", "json")):
        p.add_argument("--cap", type=int, default=None, help="element cap (default: SUMSETLAB_CAP or 10^7)")
        p.add_argument("--format", choices=fmt, default=fmt[0])

    p = sub.add_parser("calc", help="set calculus on set files")
    p.add_argument("op", choices=["sum", "diff", "prod", "quot", "hfold", "energy"])
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--set")
    p.add_argument("--h", type=int)
    p.add_argument("--elements", action="store_true", help="also print the elements")
    common(p)
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("vanish", help="signed polynomial vanishing at 1 to order k")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_vanish)

    p = sub.add_parser("cover", help="covering dichotomy of X against Y")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--K", default="2")
    p.add_argument("--verify", metavar="JSON", help="re-verify a previously emitted outcome")
    common(p, ("json",))
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("drc", help="dependent random choice on a bipartite graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=1000)
    p.add_argument("--verify", metavar="JSON")
    common(p, ("json",))
    p.set_defaults(func=cmd_drc)

    p = sub.add_parser("grow", help="exact |A.A| and |hA| for a set family")
    p.add_argument("--family", required=True, help="gp:R, ap:STEP, union-gp:R1,R2, random:RANGE:SEED")
    p.add_argument("--n", required=True, help="comma-separated sizes")
    p.add_argument("--h", default="2", help="comma-separated fold counts")
    p.add_argument("--jobs", type=int, default=1)
    common(p, ("json", "csv"))
    p.set_defaults(func=cmd_grow)

    p = sub.add_parser("pipeline", help="one proposition round or the full iteration")
    p.add_argument("--set")
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=["prop", "iterate"], default="prop")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=8)
    p.add_argument("--drc-m", type=int, default=None)
    p.add_argument("--drc-r", type=int, default=2)
    p.add_argument("--verify", metavar="JSON", help="rerun a recorded transcript and re-verify certificates")
    common(p, ("json",))
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("intersect", help="intersection algorithm on 2^t set files")
    p.add_argument("--sets", nargs="+", required=True)
    p.add_argument("--a", help="ambient set (default: union of --sets)")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--check-only", action="store_true")
    p.add_argument("--verify", metavar="JSON")
    common(p, ("json",))
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("lemma-check", help="run the randomized property suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=1)
    common(p, ("json",))
    p.set_defaults(func=cmd_lemma_check)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (ParseError, UsageError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except UnsupportedDegree as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGREE
    except HypothesisViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (RetriesExhausted, StageFailed, StepBudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GAVE_UP
    except (SumsetLabError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
