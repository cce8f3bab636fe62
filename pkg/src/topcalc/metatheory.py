"""Reduction graphs and executable checks of SN, confluence and the star lemmas.

Graph nodes are alpha-classes keyed by :func:`alpha_key`.  Every check returns
a :class:`CheckReport`; a cap hit yields ``INCONCLUSIVE`` rather than a guess.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .canon import count_stars
from .rewrite import RuleId, successors
from .syntax import (
    TOP, Abs, Pair, StarTop, Term, TyAbs, Var, all_names, alpha_key,
    children, size, var_occurrences, with_children,
)
from .typecheck import SystemId

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_DEPTH = 500


@dataclass(frozen=True)
class Caps:
    max_nodes: int = DEFAULT_MAX_NODES
    max_depth: int = DEFAULT_MAX_DEPTH


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "CAPPED"


@dataclass
class CheckReport:
    check: str
    verdict: Verdict
    witness: tuple = ()
    detail: str = ""

    def __post_init__(self) -> None:
        if self.verdict is Verdict.FAIL and not self.witness:
            raise ValueError(f"{self.check}: a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


@dataclass
class ReductionGraph:
    root: str
    nodes: dict[str, Term] = field(default_factory=dict)
    edges: set[tuple[str, RuleId, str]] = field(default_factory=set)
    depth: dict[str, int] = field(default_factory=dict)
    expanded: set[str] = field(default_factory=set)
    capped: bool = False
    caps: Caps = Caps()

    @property
    def root_term(self) -> Term:
        return self.nodes[self.root]

    def out(self, key: str) -> list[str]:
        return sorted({dst for src, _, dst in self.edges if src == key})

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {k: set() for k in self.nodes}
        for src, _, dst in self.edges:
            adj[src].add(dst)
        return {k: sorted(v) for k, v in adj.items()}

    def sinks(self) -> list[str]:
        """Expanded nodes without successors, i.e. normal forms."""
        has_out = {src for src, _, _ in self.edges}
        return sorted(k for k in self.nodes if k in self.expanded and k not in has_out)

    def normal_forms(self) -> list[Term]:
        return [self.nodes[k] for k in self.sinks()]

    def reachable(self, start: str, adj: dict[str, list[str]] | None = None) -> set[str]:
        adj = adj if adj is not None else self.adjacency()
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def find_cycle(self) -> list[str] | None:
        adj = self.adjacency()
        color: dict[str, int] = {}
        for start in sorted(self.nodes):
            if start in color:
                continue
            stack = [(start, iter(adj[start]))]
            path = [start]
            color[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = 2
                    stack.pop()
                    path.pop()
                elif color.get(nxt) == 1:
                    return path[path.index(nxt):] + [nxt]
                elif nxt not in color:
                    color[nxt] = 1
                    stack.append((nxt, iter(adj[nxt])))
                    path.append(nxt)
        return None


def build_graph(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
                disabled: Iterable[RuleId] = (), only: Iterable[RuleId] | None = None
                ) -> ReductionGraph:
    """Breadth-first exploration of the reducts of ``t``.

    ``only`` restricts the relation to the given rules, ``disabled`` removes
    rules from the system's set.
    """
    disabled = set(disabled)
    if only is not None:
        from .rewrite import RULES
        disabled |= set(RULES[system]) - set(only)
    root = alpha_key(t)
    g = ReductionGraph(root=root, caps=caps)
    g.nodes[root] = t
    g.depth[root] = 0
    queue = deque([root])
    while queue:
        key = queue.popleft()
        d = g.depth[key]
        if d >= caps.max_depth:
            g.capped = True
            continue
        g.expanded.add(key)
        for r, result in successors(g.nodes[key], system, disabled):
            rk = alpha_key(result)
            if rk not in g.nodes:
                if len(g.nodes) >= caps.max_nodes:
                    g.capped = True
                    g.expanded.discard(key)
                    break
                g.nodes[rk] = result
                g.depth[rk] = d + 1
                queue.append(rk)
            g.edges.add((key, r.rule, rk))
    return g


def check_sn(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
             graph: ReductionGraph | None = None,
             disabled: Iterable[RuleId] = ()) -> CheckReport:
    g = graph or build_graph(t, system, caps, disabled)
    cycle = g.find_cycle()
    if cycle:
        return CheckReport("sn", Verdict.FAIL, tuple(g.nodes[k] for k in cycle),
                           f"cycle of length {len(cycle) - 1}")
    if g.capped:
        return CheckReport("sn", Verdict.INCONCLUSIVE, detail=f"{len(g.nodes)} nodes explored")
    return CheckReport("sn", Verdict.PASS, detail=f"{len(g.nodes)} nodes")


def check_unique_nf(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
                    graph: ReductionGraph | None = None,
                    disabled: Iterable[RuleId] = ()) -> CheckReport:
    g = graph or build_graph(t, system, caps, disabled)
    nfs = g.normal_forms()
    if len(nfs) >= 2:
        return CheckReport("cr", Verdict.FAIL, tuple(nfs), f"{len(nfs)} distinct normal forms")
    if g.capped:
        return CheckReport("cr", Verdict.INCONCLUSIVE, tuple(nfs))
    if not nfs:
        cycle = g.find_cycle() or [g.root]
        return CheckReport("cr", Verdict.FAIL, tuple(g.nodes[k] for k in cycle),
                           "no normal form reachable")
    return CheckReport("cr", Verdict.PASS, tuple(nfs))


def check_local_confluence(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
                           graph: ReductionGraph | None = None,
                           disabled: Iterable[RuleId] = ()) -> CheckReport:
    """Every peak ``t1 <- s -> t2`` with ``s`` reachable from ``t`` must join."""
    g = graph or build_graph(t, system, caps, disabled)
    adj = g.adjacency()
    memo: dict[str, frozenset[str]] = {}

    def reach(k: str) -> frozenset[str]:
        if k not in memo:
            memo[k] = frozenset(g.reachable(k, adj))
        return memo[k]

    for src in sorted(g.expanded):
        outs = adj[src]
        for i, a in enumerate(outs):
            for b in outs[i + 1:]:
                if not reach(a) & reach(b):
                    if g.capped:
                        return CheckReport("wcr", Verdict.INCONCLUSIVE,
                                           detail="unjoined peak within capped graph")
                    return CheckReport("wcr", Verdict.FAIL,
                                       (g.nodes[src], g.nodes[a], g.nodes[b]),
                                       "peak does not join")
    if g.capped:
        return CheckReport("wcr", Verdict.INCONCLUSIVE)
    return CheckReport("wcr", Verdict.PASS)


def refresh_variable(t: Term) -> Var:
    """A variable of type Top whose name does not occur in ``t``."""
    names = all_names(t)
    name, i = "z", 0
    while name in names:
        i += 1
        name = f"z{i}"
    return Var(name, TOP)


def replace_stars(t: Term, z: Term) -> Term:
    """``t`` with every occurrence of the constant ``*`` replaced by ``z``."""
    if isinstance(t, StarTop):
        return z
    kids = children(t)
    if not kids:
        return t
    return with_children(t, tuple(replace_stars(c, z) for c in kids))


def check_refresh_lemma(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
                        disabled: Iterable[RuleId] = ()) -> CheckReport:
    """Replacing ``*`` by a fresh ``z : Top`` gives an SN term reducing back to ``t``."""
    z = refresh_variable(t)
    refreshed = replace_stars(t, z)
    g = build_graph(refreshed, system, caps, disabled)
    target = alpha_key(t)
    if target not in g.nodes:
        if g.capped:
            return CheckReport("refresh", Verdict.INCONCLUSIVE, (refreshed,))
        return CheckReport("refresh", Verdict.FAIL, (refreshed, t),
                           "original term not reachable from refreshed term")
    sn = check_sn(refreshed, system, caps, graph=g)
    if sn.verdict is not Verdict.PASS:
        return CheckReport("refresh", sn.verdict, sn.witness or (), f"refreshed term: {sn.detail}")
    return CheckReport("refresh", Verdict.PASS, (refreshed,))


def g_measure(t: Term) -> tuple[int, int]:
    return (var_occurrences(t), size(t))


def check_g_measure(t: Term, system: SystemId = SystemId.CD, caps: Caps = Caps(),
                    graph: ReductionGraph | None = None) -> CheckReport:
    """Each G-step lowers (variable occurrences, size) lexicographically.

    Without ``graph`` the G-only reduction graph of ``t`` is explored; with
    one, its G-labelled edges are checked.
    """
    g = graph or build_graph(t, system, caps, only={RuleId.G})
    for src, rule, dst in sorted(g.edges, key=lambda e: (e[0], e[1].value, e[2])):
        if rule is not RuleId.G:
            continue
        before, after = g_measure(g.nodes[src]), g_measure(g.nodes[dst])
        if not after < before:
            return CheckReport("gmeasure", Verdict.FAIL, (g.nodes[src], g.nodes[dst]),
                               f"{before} -> {after}")
    if g.capped:
        return CheckReport("gmeasure", Verdict.INCONCLUSIVE)
    return CheckReport("gmeasure", Verdict.PASS)


def is_neutral(t: Term, system: SystemId = SystemId.CD) -> bool:
    if isinstance(t, (Pair, Abs)):
        return False
    return not (system.polymorphic and isinstance(t, TyAbs))


def has_star(t: Term) -> bool:
    return count_stars(t) > 0


__all__ = [
    "Caps", "Verdict", "CheckReport", "ReductionGraph", "build_graph",
    "check_sn", "check_unique_nf", "check_local_confluence",
    "check_refresh_lemma", "check_g_measure", "g_measure", "is_neutral",
    "refresh_variable", "replace_stars", "has_star",
]
