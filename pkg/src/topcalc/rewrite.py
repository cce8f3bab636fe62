"""Rule schemata, redex enumeration and one-step contraction.

All side conditions are local to the redex: annotations make the type of a
subterm independent of its context, so a subterm has the same redexes in
isolation as it has inside a larger term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

from .canon import is_iso_top, star, star_key
from .syntax import (
    STAR, Abs, App, Arrow, Forall, Pair, Position, Product, Proj1, Proj2,
    StarTop, Term, Top, TyAbs, TyApp, Type, TypeVar, Var, all_type_names,
    alpha_key, children, free_type_vars, free_var_names, free_vars,
    replace_at, subst_term, subst_type_in_term, subst_type_in_type, subterm_at,
    type_free_vars,
)
from .typecheck import SystemId, TypingError, synth, type_of


class RuleId(Enum):
    # Declaration order is the tie-break priority among redexes at one position.
    BETA = "Beta"
    PI1 = "Pi1"
    PI2 = "Pi2"
    SP = "SP"
    SP_TOP1 = "SPTop1"
    SP_TOP2 = "SPTop2"
    ETA = "Eta"
    ETA_TOP = "EtaTop"
    BETA2 = "Beta2"
    ETA2 = "Eta2"
    G = "G"
    G_AUX = "GAux"
    T = "T"

    @property
    def priority(self) -> int:
        return _PRIORITY[self]

    def __str__(self) -> str:
        return self.value


_PRIORITY = {r: i for i, r in enumerate(RuleId)}

_BASE = frozenset({RuleId.BETA, RuleId.PI1, RuleId.PI2, RuleId.ETA, RuleId.SP})
_CD = _BASE | {RuleId.G, RuleId.ETA_TOP, RuleId.SP_TOP1, RuleId.SP_TOP2}
RULES: dict[SystemId, frozenset[RuleId]] = {
    SystemId.NAIVE: _BASE | {RuleId.T},
    SystemId.CD: _CD,
    SystemId.CD2: _CD | {RuleId.BETA2, RuleId.ETA2},
    SystemId.CD2PARAM: _CD | {RuleId.BETA2, RuleId.ETA2, RuleId.G_AUX},
}

# Beyond this many candidate occurrences only the all-occurrences
# generalization is tried for GAux.
GAUX_MAX_OCCURRENCES = 12


class StaleRedex(ValueError):
    pass


@dataclass(frozen=True)
class GAuxWitness:
    generalization: Term
    type_var: str
    instance: Type


@dataclass(frozen=True)
class Redex:
    position: Position
    rule: RuleId
    contractum: Term
    witness: Any = None

    def sort_key(self) -> tuple[Position, int]:
        return (self.position, self.rule.priority)


def active_rules(system: SystemId, disabled: Iterable[RuleId] = ()) -> frozenset[RuleId]:
    return RULES[system] - frozenset(disabled)


def _identity_key(phi: Type) -> str:
    return alpha_key(Abs("x", phi, Var("x", phi)))


def local_redexes(s: Term, ty: Type, system: SystemId, rules: frozenset[RuleId],
                  pos: Position = ()) -> list[Redex]:
    """Redexes whose redex is ``s`` itself, given its type ``ty``."""
    out: list[Redex] = []

    def add(rule: RuleId, contractum: Term, witness: Any = None) -> None:
        if rule in rules:
            out.append(Redex(pos, rule, contractum, witness))

    match s:
        case App(Abs(x, a, body), u) if RuleId.BETA in rules:
            add(RuleId.BETA, subst_term(body, x, u, a))
        case Proj1(Pair(a, _)):
            add(RuleId.PI1, a)
        case Proj2(Pair(_, b)):
            add(RuleId.PI2, b)
        case Abs(x, tau, App(f, arg)):
            if x not in free_var_names(f):
                if isinstance(arg, Var) and arg.name == x:
                    add(RuleId.ETA, f)
                if RuleId.ETA_TOP in rules:
                    k = star_key(tau, system)
                    if k is not None and alpha_key(arg) == k:
                        add(RuleId.ETA_TOP, f)
        case Pair(first, second):
            if isinstance(first, Proj1) and isinstance(second, Proj2):
                if alpha_key(first.arg) == alpha_key(second.arg):
                    add(RuleId.SP, first.arg)
            if RuleId.SP_TOP1 in rules and isinstance(first, Proj1):
                ut = synth(first.arg)
                k = star_key(ut.right, system)
                if k is not None and alpha_key(second) == k:
                    add(RuleId.SP_TOP1, first.arg)
            if RuleId.SP_TOP2 in rules and isinstance(second, Proj2):
                ut = synth(second.arg)
                k = star_key(ut.left, system)
                if k is not None and alpha_key(first) == k:
                    add(RuleId.SP_TOP2, second.arg)
        case TyApp(TyAbs(x, body), phi) if RuleId.BETA2 in rules:
            add(RuleId.BETA2, subst_type_in_term(body, x, phi))
        case TyAbs(x, TyApp(f, TypeVar(y))) if y == x and RuleId.ETA2 in rules:
            if x not in free_type_vars(f):
                add(RuleId.ETA2, f)

    if RuleId.G in rules:
        k = star_key(ty, system)
        if k is not None and alpha_key(s) != k:
            add(RuleId.G, star(ty, system))
    if RuleId.T in rules and isinstance(ty, Top) and not isinstance(s, StarTop):
        add(RuleId.T, STAR)
    if RuleId.G_AUX in rules and isinstance(ty, Arrow):
        phi = ty.domain
        if (alpha_key(phi) == alpha_key(ty.codomain) and not is_iso_top(phi, system)
                and alpha_key(s) != _identity_key(phi)):
            w = gaux_generalization(s, phi)
            if w is not None:
                add(RuleId.G_AUX, Abs("x", phi, Var("x", phi)), w)
    return out


def redexes(t: Term, system: SystemId = SystemId.CD,
            disabled: Iterable[RuleId] = ()) -> list[Redex]:
    """Every redex of ``t``, ordered by position (pre-order) then rule priority."""
    rules = active_rules(system, disabled)
    out: list[Redex] = []

    def visit(s: Term, pos: Position) -> Type:
        kid_types = [visit(c, pos + (i,)) for i, c in enumerate(children(s))]
        ty = _type_from_children(s, kid_types)
        out.extend(local_redexes(s, ty, system, rules, pos))
        return ty

    visit(t, ())
    out.sort(key=Redex.sort_key)
    return out


def _type_from_children(s: Term, kid: list[Type]) -> Type:
    match s:
        case Var(_, ty):
            return ty
        case StarTop():
            return Top()
        case Abs(_, ty, _):
            return Arrow(ty, kid[0])
        case App():
            return kid[0].codomain
        case Pair():
            return Product(kid[0], kid[1])
        case Proj1():
            return kid[0].left
        case Proj2():
            return kid[0].right
        case TyAbs(x, _):
            return Forall(x, kid[0])
        case TyApp(_, ty):
            return subst_type_in_type(kid[0].body, kid[0].binder, ty)
    raise TypeError(f"not a term: {s!r}")


def apply_redex(t: Term, r: Redex, system: SystemId = SystemId.CD,
                disabled: Iterable[RuleId] = ()) -> Term:
    """Contract ``r`` in ``t``; :class:`StaleRedex` if it no longer matches."""
    try:
        s = subterm_at(t, r.position)
    except ValueError as exc:
        raise StaleRedex(str(exc)) from exc
    rules = active_rules(system, disabled)
    want = alpha_key(r.contractum)
    for cand in local_redexes(s, synth(s), system, rules, r.position):
        if cand.rule is r.rule and alpha_key(cand.contractum) == want:
            return replace_at(t, r.position, r.contractum)
    raise StaleRedex(f"{r.rule} does not apply at {list(r.position)}")


def successors(t: Term, system: SystemId = SystemId.CD,
               disabled: Iterable[RuleId] = ()) -> list[tuple[Redex, Term]]:
    """One-step reducts, deduplicated by (result alpha-class, rule)."""
    seen: set[tuple[str, RuleId]] = set()
    out = []
    for r in redexes(t, system, disabled):
        result = replace_at(t, r.position, r.contractum)
        key = (alpha_key(result), r.rule)
        if key not in seen:
            seen.add(key)
            out.append((r, result))
    return out


# ---------------------------------------------------------------------------
# GAux: is s an instance s'[X := phi] of some s' : X -> X ?


def _map_type_occurrences(ty: Type, phi_key: str, phi_ftv: frozenset[str],
                          bound: frozenset[str], counter: list[int],
                          chosen: frozenset[int], x: str) -> Type:
    if not (phi_ftv & bound) and alpha_key(ty) == phi_key:
        i = counter[0]
        counter[0] += 1
        return TypeVar(x) if i in chosen else ty
    match ty:
        case Product(a, b):
            return Product(_map_type_occurrences(a, phi_key, phi_ftv, bound, counter, chosen, x),
                           _map_type_occurrences(b, phi_key, phi_ftv, bound, counter, chosen, x))
        case Arrow(a, b):
            return Arrow(_map_type_occurrences(a, phi_key, phi_ftv, bound, counter, chosen, x),
                         _map_type_occurrences(b, phi_key, phi_ftv, bound, counter, chosen, x))
        case Forall(y, body):
            return Forall(y, _map_type_occurrences(body, phi_key, phi_ftv, bound | {y},
                                                   counter, chosen, x))
    return ty


def _abstract_occurrences(t: Term, phi: Type, chosen: frozenset[int], x: str) -> tuple[Term, int]:
    """Replace the chosen occurrences of ``phi`` in annotations by ``x``.

    Occurrences under a binder for one of phi's free type variables are not
    occurrences of phi and are skipped.  Returns the new term and the total
    number of occurrences seen.
    """
    phi_key = alpha_key(phi)
    phi_ftv = type_free_vars(phi)
    counter = [0]

    def mt(ty: Type, bound: frozenset[str]) -> Type:
        return _map_type_occurrences(ty, phi_key, phi_ftv, bound, counter, chosen, x)

    def go(s: Term, bound: frozenset[str]) -> Term:
        match s:
            case Var(n, ty):
                return Var(n, mt(ty, bound))
            case StarTop():
                return s
            case Abs(y, ty, body):
                ty2 = mt(ty, bound)
                return Abs(y, ty2, go(body, bound))
            case TyAbs(y, body):
                return TyAbs(y, go(body, bound | {y}))
            case TyApp(f, ty):
                f2 = go(f, bound)
                return TyApp(f2, mt(ty, bound))
            case App(a, b):
                a2 = go(a, bound)
                return App(a2, go(b, bound))
            case Pair(a, b):
                a2 = go(a, bound)
                return Pair(a2, go(b, bound))
            case Proj1(a):
                return Proj1(go(a, bound))
            case Proj2(a):
                return Proj2(go(a, bound))
        raise TypeError(s)

    result = go(t, frozenset())
    return result, counter[0]


def gaux_generalization(s: Term, phi: Type) -> GAuxWitness | None:
    """Search for ``s'`` of type ``X -> X`` with ``s'[X:=phi]`` equal to ``s``.

    The eigenvariable condition is required of ``X``: it may not occur free
    in the type of any free variable of ``s'``.  Subsets of occurrences are
    tried largest first, so the all-occurrences candidate comes first.  The
    search is exponential in the number of occurrences.
    """
    used = all_type_names(s) | type_free_vars(phi)
    x, i = "X", 0
    while x in used:
        i += 1
        x = f"X{i}"
    _, n = _abstract_occurrences(s, phi, frozenset(), x)
    if n == 0:
        return None
    target = alpha_key(Arrow(TypeVar(x), TypeVar(x)))
    sizes = range(n, 0, -1) if n <= GAUX_MAX_OCCURRENCES else (n,)
    for k in sizes:
        for combo in itertools.combinations(range(n), k):
            cand, _ = _abstract_occurrences(s, phi, frozenset(combo), x)
            try:
                cty = type_of(cand, SystemId.CD2PARAM)
            except TypingError:
                continue
            if alpha_key(cty) != target:
                continue
            if any(x in type_free_vars(vt) for _, vt in free_vars(cand)):
                continue
            return GAuxWitness(cand, x, phi)
    return None


__all__ = [
    "RuleId", "Redex", "RULES", "GAuxWitness", "StaleRedex", "active_rules",
    "redexes", "local_redexes", "apply_redex", "successors",
    "gaux_generalization",
]
