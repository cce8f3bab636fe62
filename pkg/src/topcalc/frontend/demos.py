"""Small fixed examples, shared by the ``demo`` subcommand and the tests."""

from __future__ import annotations

from dataclasses import dataclass

from ..metatheory import build_graph
from ..normalize import LO, normalize
from ..rewrite import RuleId
from ..syntax import Term, replace_at
from ..typecheck import SystemId
from .parser import parse_term
from .printer import print_term

# (term, context) pairs whose NAIVE reduction graphs have two normal forms
DIVERGENT = (
    (r"\x:A. y x", "y:A -> Top"),
    ("<p1 x, p2 x>", "x:Top * Top"),
    (r"\x:Top. y x", "y:Top -> B"),
    ("<p1 x, p2 x>", "x:A * Top"),
    ("<p1 x, p2 x>", "x:Top * A"),
)

POLY_GNF = (r"(/\X. \x:X. \y:(X -> Y). y x) [Top]", "")

# w is an identity at every type, so G may collapse it to the identity star
GAUX_IDENTITY = (r"(/\X. \x:X. w [X] x) [Z]", "w:forall Y. Y -> Y")
# h is not an identity star, so only the instance rule joins the peak
GAUX_PROJECTION = (r"(/\X. \x:X. h [X] <x, a>) [Z]", "h:forall Y. Y * A -> Y, a:A")


@dataclass(frozen=True)
class Divergence:
    term: Term
    naive: tuple[Term, ...]
    cd: tuple[Term, ...]


def divergences() -> list[Divergence]:
    out = []
    for text, ctx in DIVERGENT:
        t = parse_term(text, ctx)
        out.append(Divergence(t, tuple(build_graph(t, SystemId.NAIVE).normal_forms()),
                              tuple(build_graph(t, SystemId.CD).normal_forms())))
    return out


def _nfs(nfs) -> str:
    return "{" + ", ".join(sorted(print_term(t) for t in nfs)) + "}"


def nonconfluence() -> list[str]:
    lines = []
    for (_, ctx), d in zip(DIVERGENT, divergences()):
        lines.append(f"{print_term(d.term)}    [{ctx}]")
        lines.append(f"  naive normal forms: {_nfs(d.naive)}")
        lines.append(f"  cd normal forms:    {_nfs(d.cd)}")
    return lines


def polygnf() -> list[str]:
    t = parse_term(*POLY_GNF, system=SystemId.CD2)
    trace = normalize(t, SystemId.CD2, LO)
    lines = [print_term(t)]
    for before, r in trace.steps:
        after = replace_at(before, r.position, r.contractum)
        lines.append(f"  --{r.rule.value}-> {print_term(after)}")
    return lines


def gaux() -> list[str]:
    lines = []
    for text, ctx in (GAUX_IDENTITY, GAUX_PROJECTION):
        t = parse_term(text, ctx, SystemId.CD2PARAM)
        lines.append(f"{print_term(t)}    [{ctx}]")
        for label, disabled in (("with GAux", ()), ("without GAux", (RuleId.G_AUX,))):
            g = build_graph(t, SystemId.CD2PARAM, disabled=disabled)
            lines.append(f"  {label}: normal forms {_nfs(g.normal_forms())}")
    return lines


DEMOS = {"nonconfluence": nonconfluence, "polygnf": polygnf, "gaux": gaux}
