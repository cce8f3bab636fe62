"""Seeded, goal-directed generation of well-typed terms.

Generation works backwards from a target type.  Each step picks, by weight,
an introduction form for the target, an elimination spine headed by a
variable in scope, or a cut (an introduction immediately eliminated, i.e. a
beta-, pi- or beta2-redex) so that graphs have something to reduce.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .canon import is_star_free
from .syntax import (
    STAR, TOP, Abs, App, Arrow, Forall, Pair, Product, Proj1, Proj2, Term, Top,
    TyAbs, TyApp, Type, TypeVar, Var, alpha_key, size, subst_type_in_type,
    type_free_vars, type_size,
)
from .typecheck import SystemId, type_of

A, B, Y, Z = TypeVar("A"), TypeVar("B"), TypeVar("Y"), TypeVar("Z")

SIMPLE_POOL: tuple[tuple[str, Type], ...] = (
    ("a", A),
    ("b", B),
    ("u", TOP),
    ("f", Arrow(A, B)),
    ("g", Arrow(TOP, A)),
    ("k", Arrow(A, TOP)),
    ("p", Product(A, B)),
    ("q", Product(A, TOP)),
    ("r", Product(TOP, TOP)),
)

POLY_POOL: tuple[tuple[str, Type], ...] = SIMPLE_POOL[:5] + (
    ("q", Product(A, TOP)),
    ("i", Forall("Y", Arrow(TypeVar("Y"), TypeVar("Y")))),
    ("h", Forall("Y", Arrow(Product(TypeVar("Y"), A), TypeVar("Y")))),
    ("c", Forall("Y", Arrow(TypeVar("Y"), TOP))),
)

BOUND_NAMES = ("x", "y", "z", "v")


class GenerationFailure(RuntimeError):
    pass


class _Dead(Exception):
    """Internal: this branch cannot fit the remaining budget."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_term_size: int = 12
    target_type: Type | None = None
    star_free: bool = False
    system: SystemId = SystemId.CD
    type_depth: int = 2
    free_var_pool: tuple[tuple[str, Type], ...] | None = None
    base_types: tuple[str, ...] = ("A", "B")
    intro_weight: float = 0.6
    elim_weight: float = 0.4
    # share of the elimination weight spent on cuts instead of pool heads
    cut_share: float = 0.3
    retries: int = 200

    def pool(self) -> tuple[tuple[str, Type], ...]:
        if self.free_var_pool is not None:
            return self.free_var_pool
        return POLY_POOL if self.system.polymorphic else SIMPLE_POOL


def gen_type(config: GenConfig, rng: random.Random | None = None, depth: int | None = None,
             tvars: tuple[str, ...] = ()) -> Type:
    rng = rng or random.Random(config.seed)
    depth = config.type_depth if depth is None else depth
    atoms: list[Type] = [TOP] + [TypeVar(n) for n in config.base_types] + [TypeVar(n) for n in tvars]
    if depth <= 1:
        return rng.choice(atoms)
    choices = ["atom", "product", "arrow"]
    if config.system.polymorphic:
        choices.append("forall")
    kind = rng.choice(choices)
    if kind == "atom":
        return rng.choice(atoms)
    if kind == "product":
        return Product(gen_type(config, rng, depth - 1, tvars), gen_type(config, rng, depth - 1, tvars))
    if kind == "arrow":
        return Arrow(gen_type(config, rng, depth - 1, tvars), gen_type(config, rng, depth - 1, tvars))
    x = f"X{len(tvars)}"
    return Forall(x, gen_type(config, rng, depth - 1, tvars + (x,)))


@dataclass
class _Ctx:
    vars: list[tuple[str, Type]]
    tvars: tuple[str, ...] = ()

    def bind(self, name: str, ty: Type) -> _Ctx:
        return _Ctx([v for v in self.vars if v[0] != name] + [(name, ty)], self.tvars)

    def bind_type(self, name: str) -> _Ctx:
        return _Ctx(self.vars, self.tvars + (name,))

    def used_type_names(self) -> set[str]:
        used = set(self.tvars)
        for _, ty in self.vars:
            used |= type_free_vars(ty)
        return used


@dataclass
class _Gen:
    config: GenConfig
    rng: random.Random

    def fresh_tvar(self, ctx: _Ctx, avoid: set[str] = frozenset()) -> str:
        used = ctx.used_type_names() | set(avoid) | set(self.config.base_types)
        i = 0
        while f"X{i}" in used:
            i += 1
        return f"X{i}"

    def term(self, ty: Type, ctx: _Ctx, budget: int) -> Term:
        if budget <= 0:
            raise _Dead
        cfg = self.config
        roll = self.rng.random() * (cfg.intro_weight + cfg.elim_weight)
        order: list[str]
        if roll < cfg.intro_weight:
            order = ["intro", "elim", "cut"]
        elif self.rng.random() < cfg.cut_share:
            order = ["cut", "elim", "intro"]
        else:
            order = ["elim", "intro", "cut"]
        for kind in order:
            try:
                return getattr(self, kind)(ty, ctx, budget)
            except _Dead:
                continue
        raise _Dead

    def _split(self, budget: int) -> tuple[int, int]:
        left = self.rng.randint(1, max(1, budget - 1))
        return left, max(1, budget - left)

    def intro(self, ty: Type, ctx: _Ctx, budget: int) -> Term:
        match ty:
            case Top():
                if self.config.star_free:
                    raise _Dead
                return STAR
            case Product(a, b):
                if budget < 3:
                    raise _Dead
                la, lb = self._split(budget - 1)
                return Pair(self.term(a, ctx, la), self.term(b, ctx, lb))
            case Arrow(a, b):
                if budget < 2:
                    raise _Dead
                x = self.rng.choice(BOUND_NAMES)
                return Abs(x, a, self.term(b, ctx.bind(x, a), budget - 1))
            case Forall(x, body):
                if budget < 2 or not self.config.system.polymorphic:
                    raise _Dead
                x2 = self.fresh_tvar(ctx, type_free_vars(body))
                body = subst_type_in_type(body, x, TypeVar(x2))
                return TyAbs(x2, self.term(body, ctx.bind_type(x2), budget - 1))
        raise _Dead

    def _paths(self, src: Type, dst: Type, ctx: _Ctx, depth: int) -> list[list[tuple]]:
        """Elimination spines turning a ``src`` into a ``dst``."""
        found: list[list[tuple]] = []
        if alpha_key(src) == alpha_key(dst):
            found.append([])
        if depth == 0:
            return found
        match src:
            case Arrow(a, b):
                found += [[("app", a)] + p for p in self._paths(b, dst, ctx, depth - 1)]
            case Product(a, b):
                found += [[("p1",)] + p for p in self._paths(a, dst, ctx, depth - 1)]
                found += [[("p2",)] + p for p in self._paths(b, dst, ctx, depth - 1)]
            case Forall(x, body) if self.config.system.polymorphic:
                insts = [dst, TOP] + [TypeVar(n) for n in self.config.base_types + ctx.tvars]
                seen = set()
                for phi in insts:
                    k = alpha_key(phi)
                    if k in seen:
                        continue
                    seen.add(k)
                    inst = subst_type_in_type(body, x, phi)
                    found += [[("tyapp", phi)] + p for p in self._paths(inst, dst, ctx, depth - 1)]
        return found

    def elim(self, ty: Type, ctx: _Ctx, budget: int) -> Term:
        options = []
        for name, vty in ctx.vars:
            for path in self._paths(vty, ty, ctx, 3):
                cost = 1 + sum(2 if step[0] == "app" else 1 for step in path)
                if cost <= budget:
                    options.append((name, vty, path))
        if not options:
            raise _Dead
        name, vty, path = self.rng.choice(options)
        head: Term = Var(name, vty)
        remaining = budget - 1 - len(path)
        for step in path:
            match step:
                case ("app", a):
                    arg_budget = self.rng.randint(1, max(1, remaining))
                    head = App(head, self.term(a, ctx, arg_budget))
                    remaining -= arg_budget
                case ("p1",):
                    head = Proj1(head)
                case ("p2",):
                    head = Proj2(head)
                case ("tyapp", phi):
                    head = TyApp(head, phi)
        return head

    def cut(self, ty: Type, ctx: _Ctx, budget: int) -> Term:
        kinds = ["beta", "pi"]
        if self.config.system.polymorphic:
            kinds.append("beta2")
        kind = self.rng.choice(kinds)
        if kind == "beta":
            if budget < 4:
                raise _Dead
            sigma = gen_type(self.config, self.rng, self.rng.randint(1, self.config.type_depth),
                             ctx.tvars)
            x = self.rng.choice(BOUND_NAMES)
            lb, la = self._split(budget - 2)
            body = self.term(ty, ctx.bind(x, sigma), lb)
            return App(Abs(x, sigma, body), self.term(sigma, ctx, la))
        if kind == "pi":
            if budget < 4:
                raise _Dead
            other = gen_type(self.config, self.rng, 1, ctx.tvars)
            la, lb = self._split(budget - 2)
            if self.rng.random() < 0.5:
                return Proj1(Pair(self.term(ty, ctx, la), self.term(other, ctx, lb)))
            return Proj2(Pair(self.term(other, ctx, lb), self.term(ty, ctx, la)))
        if budget < 3:
            raise _Dead
        # beta2: abstract some subtype phi of the target, then instantiate it back
        x = self.fresh_tvar(ctx, type_free_vars(ty))
        subtypes = _closed_subtypes(ty)
        phi = self.rng.choice(subtypes) if subtypes and self.rng.random() < 0.7 else \
            gen_type(self.config, self.rng, 1, ctx.tvars)
        sigma = _abstract(ty, alpha_key(phi), x)
        body = self.term(sigma, ctx.bind_type(x), budget - 2)
        return TyApp(TyAbs(x, body), phi)


def _closed_subtypes(ty: Type, bound: frozenset[str] = frozenset()) -> list[Type]:
    out = []
    if not (type_free_vars(ty) & bound):
        out.append(ty)
    match ty:
        case Product(a, b) | Arrow(a, b):
            out += _closed_subtypes(a, bound) + _closed_subtypes(b, bound)
        case Forall(x, body):
            out += _closed_subtypes(body, bound | {x})
    return out


def _abstract(ty: Type, key: str, x: str, bound: frozenset[str] = frozenset()) -> Type:
    if alpha_key(ty) == key:
        return TypeVar(x)
    match ty:
        case Product(a, b):
            return Product(_abstract(a, key, x, bound), _abstract(b, key, x, bound))
        case Arrow(a, b):
            return Arrow(_abstract(a, key, x, bound), _abstract(b, key, x, bound))
        case Forall(y, body):
            return Forall(y, _abstract(body, key, x, bound | {y}))
    return ty


def gen_term(config: GenConfig, rng: random.Random | None = None) -> Term:
    """One well-typed term within ``config.max_term_size``.

    Raises :class:`GenerationFailure` once ``config.retries`` attempts fail,
    e.g. for an uninhabited target with an empty pool.
    """
    rng = rng or random.Random(config.seed)
    g = _Gen(config, rng)
    pool = list(config.pool())
    for _ in range(config.retries):
        ty = config.target_type or gen_type(config, rng)
        budget = rng.randint(1, config.max_term_size)
        try:
            t = g.term(ty, _Ctx(pool), budget)
        except _Dead:
            continue
        if size(t) > config.max_term_size:
            continue
        if config.star_free and not is_star_free(t, config.system):
            continue
        type_of(t, config.system)
        return t
    raise GenerationFailure(f"no term of type {config.target_type} after {config.retries} attempts")


def corpus(config: GenConfig, count: int) -> list[Term]:
    """``count`` pairwise non-alpha-equal terms, deterministic in the seed."""
    rng = random.Random(config.seed)
    out: list[Term] = []
    seen: set[str] = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count + 100:
            raise GenerationFailure(f"only {len(out)} distinct terms after {attempts} attempts")
        t = gen_term(config, rng)
        k = alpha_key(t)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return out


def rule_coverage(terms, system: SystemId) -> Counter:
    """How often each rule labels an edge across the terms' reduction graphs."""
    from .metatheory import build_graph

    counts: Counter = Counter()
    for t in terms:
        for _, rule, _ in build_graph(t, system).edges:
            counts[rule] += 1
    return counts


__all__ = [
    "GenConfig", "GenerationFailure", "gen_type", "gen_term", "corpus",
    "rule_coverage", "SIMPLE_POOL", "POLY_POOL",
]
