"""Command-line entry point.

Exit codes: 0 success, 1 property failure / not equal / distinct normal
forms, 2 usage, parse or type error, 3 fuel or cap exhaustion.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from ..gen import GenConfig, GenerationFailure, corpus
from ..metatheory import (
    Caps, Verdict, build_graph, check_g_measure, check_local_confluence,
    check_refresh_lemma, check_sn, check_unique_nf, has_star,
)
from ..normalize import LI, LO, FuelExhausted, Random, RefusedSystem, eq_decide, normalize
from ..syntax import alpha_key, replace_at
from ..typecheck import SystemId, TypingError, type_of
from .demos import DEMOS
from .dot import term_hash, to_dot
from .parser import ParseError, parse_term
from .printer import print_term, print_type

OK, PROPERTY_FAILED, USAGE, EXHAUSTED = 0, 1, 2, 3

CHECKS = ("sn", "cr", "wcr", "refresh", "gmeasure")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _system(text: str) -> SystemId:
    try:
        return SystemId(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown system {text!r}") from None


def _strategy(args):
    return {"lo": LO, "li": LI}.get(args.strategy) or Random(args.seed)


def _term(args, text: str):
    t = parse_term(text, args.ctx, args.system)
    type_of(t, args.system)
    return t


def cmd_typecheck(args) -> int:
    print(print_type(type_of(_term(args, args.term), args.system)))
    return OK


def cmd_normalize(args) -> int:
    t = _term(args, args.term)
    try:
        trace = normalize(t, args.system, _strategy(args), args.fuel)
    except FuelExhausted as exc:
        print(f"fuel exhausted after {exc.steps} steps: {print_term(exc.last)}", file=sys.stderr)
        return EXHAUSTED
    if args.trace:
        print(print_term(t))
        for before, r in trace.steps:
            after = replace_at(before, r.position, r.contractum)
            where = ".".join(map(str, r.position)) or "root"
            print(f"  --{r.rule.value} @ {where}-> {print_term(after)}")
    print(print_term(trace.result))
    return OK


def cmd_eq(args) -> int:
    t, u = _term(args, args.left), _term(args, args.right)
    try:
        verdict = eq_decide(t, u, args.system, args.fuel, force=args.force)
    except RefusedSystem as exc:
        print(f"{exc}; pass --force to compare normal-form sets", file=sys.stderr)
        return USAGE
    except FuelExhausted as exc:
        print(f"fuel exhausted after {exc.steps} steps", file=sys.stderr)
        return EXHAUSTED
    if isinstance(verdict, bool):
        print("EQUAL" if verdict else "NOT EQUAL")
        return OK if verdict else PROPERTY_FAILED
    for side, nfs in (("left", verdict.left), ("right", verdict.right)):
        print(f"{side} normal forms:")
        for nf in sorted(print_term(n) for n in nfs):
            print(f"  {nf}")
    if verdict.decided_equal:
        print("EQUAL")
        return OK
    print("COMMON NORMAL FORM" if verdict.common else "NOT EQUAL")
    return PROPERTY_FAILED


def cmd_graph(args) -> int:
    t = _term(args, args.term)
    g = build_graph(t, args.system, Caps(args.max_nodes, args.max_depth))
    nfs = g.normal_forms()
    print(f"nodes: {len(g.nodes)}")
    print(f"edges: {len(g.edges)}")
    print(f"normal forms: {len(nfs)}")
    for nf in sorted(print_term(n) for n in nfs):
        print(f"  {nf}")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(g))
    if g.capped:
        print("capped: graph exploration hit a limit", file=sys.stderr)
        return EXHAUSTED
    return PROPERTY_FAILED if len(nfs) > 1 else OK


def run_checks(t, system: SystemId, checks, caps: Caps = Caps()) -> list[tuple[str, str, str]]:
    """``(verdict, check, term hash)`` rows for one term, in ``checks`` order."""
    h = term_hash(alpha_key(t))
    g = build_graph(t, system, caps) if {"sn", "cr", "wcr"} & set(checks) else None
    rows = []
    for name in checks:
        if name == "sn":
            rep = check_sn(t, system, caps, graph=g)
        elif name == "cr":
            rep = check_unique_nf(t, system, caps, graph=g)
        elif name == "wcr":
            rep = check_local_confluence(t, system, caps, graph=g)
        elif name == "refresh":
            if not has_star(t):
                continue
            rep = check_refresh_lemma(t, system, caps)
        else:
            rep = check_g_measure(t, system, caps)
        rows.append((rep.verdict.value, name, h))
    return rows


def _check_job(job):
    return run_checks(*job)


def cmd_fuzz(args) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = sorted(set(checks) - set(CHECKS))
    if unknown:
        print(f"unknown checks: {', '.join(unknown)}", file=sys.stderr)
        return USAGE
    config = GenConfig(seed=args.seed, max_term_size=args.size, system=args.system)
    try:
        terms = corpus(config, args.count)
    except GenerationFailure as exc:
        print(str(exc), file=sys.stderr)
        return EXHAUSTED
    jobs = [(t, args.system, checks) for t in terms]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_check_job, jobs, chunksize=16))
    else:
        results = map(_check_job, jobs)
    verdicts = set()
    for rows in results:
        for verdict, name, h in rows:
            verdicts.add(verdict)
            print(f"{verdict} {name} {h}")
    if Verdict.FAIL.value in verdicts:
        return PROPERTY_FAILED
    if Verdict.INCONCLUSIVE.value in verdicts:
        return EXHAUSTED
    return OK


def cmd_demo(args) -> int:
    print("\n".join(DEMOS[args.name]()))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topcalc", description="Rewrite lambda terms with a terminal type.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, term_args=("term",)):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        for a in term_args:
            p.add_argument(a)
        p.add_argument("--system", type=_system, default=SystemId.CD,
                       help="naive, cd, cd2 or cd2param (default cd)")
        p.add_argument("--ctx", default="", help='free-variable types, e.g. "x:A, y:A -> Top"')
        return p

    add("typecheck", cmd_typecheck, "print the type of a term")

    p = add("normalize", cmd_normalize, "rewrite a term to normal form")
    p.add_argument("--strategy", choices=("lo", "li", "random"), default="lo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuel", type=int, default=10_000)
    p.add_argument("--trace", action="store_true")

    p = add("eq", cmd_eq, "decide equality of two terms", ("left", "right"))
    p.add_argument("--fuel", type=int, default=10_000)
    p.add_argument("--force", action="store_true",
                   help="compare normal-form sets in naive or cd2param")

    p = add("graph", cmd_graph, "explore the reduction graph of a term")
    p.add_argument("--dot", metavar="FILE")
    p.add_argument("--max-nodes", type=int, default=Caps().max_nodes)
    p.add_argument("--max-depth", type=int, default=Caps().max_depth)

    p = add("fuzz", cmd_fuzz, "run the checks over a generated corpus", ())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--size", type=int, default=12)
    p.add_argument("--checks", default=",".join(CHECKS))
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("demo", help="print a built-in example")
    p.set_defaults(func=cmd_demo)
    p.add_argument("name", choices=sorted(DEMOS))
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except TypingError as exc:
        print(f"type error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
