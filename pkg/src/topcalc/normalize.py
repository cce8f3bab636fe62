"""Fuel-bounded normalization under fixed strategies, and equality checking."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .rewrite import Redex, RuleId, redexes
from .syntax import Term, alpha_key, replace_at
from .typecheck import SystemId, type_of

DEFAULT_FUEL = 10_000


@dataclass(frozen=True)
class LeftmostOutermost:
    name = "lo"


@dataclass(frozen=True)
class LeftmostInnermost:
    name = "li"


@dataclass(frozen=True)
class Random:
    seed: int = 0
    name = "random"


Strategy = LeftmostOutermost | LeftmostInnermost | Random

LO = LeftmostOutermost()
LI = LeftmostInnermost()


@dataclass
class Trace:
    initial: Term
    steps: list[tuple[Term, Redex]] = field(default_factory=list)
    result: Term | None = None

    @property
    def fuel_used(self) -> int:
        return len(self.steps)

    def replay(self) -> Term:
        t = self.initial
        for _, r in self.steps:
            t = replace_at(t, r.position, r.contractum)
        return t


class FuelExhausted(Exception):
    def __init__(self, last: Term, steps: int, trace: Trace):
        super().__init__(f"no normal form after {steps} steps")
        self.last = last
        self.steps = steps
        self.trace = trace


class RefusedSystem(ValueError):
    pass


class EqTypeMismatch(ValueError):
    pass


def _is_below(p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    return len(q) > len(p) and q[: len(p)] == p


def choose(rs: list[Redex], strategy: Strategy, rng: random.Random | None = None) -> Redex:
    """Pick one redex from a list sorted by (position, rule priority)."""
    match strategy:
        case LeftmostOutermost():
            return rs[0]
        case LeftmostInnermost():
            innermost = [r for r in rs if not any(_is_below(r.position, o.position) for o in rs)]
            return innermost[0]
        case Random():
            assert rng is not None
            return rs[rng.randrange(len(rs))]
    raise TypeError(f"unknown strategy {strategy!r}")


def normalize(t: Term, system: SystemId = SystemId.CD, strategy: Strategy = LO,
              fuel: int = DEFAULT_FUEL, disabled: Iterable[RuleId] = ()) -> Trace:
    """Rewrite until no redex remains; raises :class:`FuelExhausted`.

    In CD and CD2 exhaustion means a bug, since both systems terminate.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    disabled = tuple(disabled)
    rng = random.Random(strategy.seed) if isinstance(strategy, Random) else None
    trace = Trace(t)
    cur = t
    while True:
        rs = redexes(cur, system, disabled)
        if not rs:
            trace.result = cur
            return trace
        if len(trace.steps) >= fuel:
            raise FuelExhausted(cur, len(trace.steps), trace)
        r = choose(rs, strategy, rng)
        trace.steps.append((cur, r))
        cur = replace_at(cur, r.position, r.contractum)


def normal_form(t: Term, system: SystemId = SystemId.CD, strategy: Strategy = LO,
                fuel: int = DEFAULT_FUEL) -> Term:
    return normalize(t, system, strategy, fuel).result


@dataclass(frozen=True)
class NormalFormSets:
    """Graph-search outcome for ``eq_decide`` in a non-confluent system."""
    left: tuple[Term, ...]
    right: tuple[Term, ...]

    @property
    def common(self) -> bool:
        return bool({alpha_key(a) for a in self.left} & {alpha_key(b) for b in self.right})

    @property
    def decided_equal(self) -> bool:
        return (len(self.left) == len(self.right) == 1
                and alpha_key(self.left[0]) == alpha_key(self.right[0]))


def eq_decide(t: Term, u: Term, system: SystemId = SystemId.CD, fuel: int = DEFAULT_FUEL,
              force: bool = False) -> bool | NormalFormSets:
    """Decide ``t = u`` by comparing normal forms.

    Only CD and CD2 are confluent and terminating.  For NAIVE and CD2PARAM the
    call is refused unless ``force`` is set, in which case all normal forms
    reachable from either side are returned instead of a verdict.
    """
    tt, ut = type_of(t, system), type_of(u, system)
    if alpha_key(tt) != alpha_key(ut):
        raise EqTypeMismatch(f"types differ: {tt} vs {ut}")
    if system in (SystemId.CD, SystemId.CD2):
        a = normalize(t, system, LO, fuel).result
        b = normalize(u, system, LO, fuel).result
        return alpha_key(a) == alpha_key(b)
    if not force:
        raise RefusedSystem(f"{system.value} is not known to be confluent and terminating")
    from .metatheory import build_graph

    left = build_graph(t, system).normal_forms()
    right = build_graph(u, system).normal_forms()
    return NormalFormSets(tuple(left), tuple(right))
