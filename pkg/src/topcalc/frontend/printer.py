"""Pretty printer producing text the parser reads back to an alpha-equal term.

Bound names are re-chosen on the way out: the base of the original name,
suffixed with the smallest number that avoids capturing anything.  Output
therefore never shows the internal fresh-name mark and is deterministic.
"""

from __future__ import annotations

from ..syntax import (
    Abs, App, Arrow, Forall, Pair, Product, Proj1, Proj2, StarTop, Term, Top,
    TyAbs, TyApp, Type, TypeVar, Var, base_name, free_type_vars, free_var_names,
    type_free_vars,
)
from .parser import KEYWORDS


def _pick(base: str, avoid: set[str]) -> str:
    base = base_name(base)
    if base not in avoid and base not in KEYWORDS:
        return base
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def print_type(ty: Type, tn: dict[str, str] | None = None, prec: int = 0) -> str:
    tn = tn or {}
    match ty:
        case Top():
            return "Top"
        case TypeVar(n):
            return tn.get(n, n)
        case Arrow(a, b):
            s = f"{print_type(a, tn, 1)} -> {print_type(b, tn, 0)}"
            return f"({s})" if prec >= 1 else s
        case Product(a, b):
            s = f"{print_type(a, tn, 2)} * {print_type(b, tn, 1)}"
            return f"({s})" if prec >= 2 else s
        case Forall(x, body):
            avoid = {tn.get(v, v) for v in type_free_vars(body) - {x}}
            y = _pick(x, avoid)
            s = f"forall {y}. {print_type(body, {**tn, x: y}, 0)}"
            return f"({s})" if prec >= 1 else s
    raise TypeError(ty)


def print_term(t: Term) -> str:
    return _term(t, {}, {}, 0)


def _term(t: Term, rn: dict[str, str], tn: dict[str, str], prec: int) -> str:
    match t:
        case Var(n, _):
            return rn.get(n, n)
        case StarTop():
            return "*"
        case Abs(x, ty, body):
            avoid = {rn.get(v, v) for v in free_var_names(body) - {x}}
            y = _pick(x, avoid)
            s = f"\\{y}:{print_type(ty, tn, 1)}. {_term(body, {**rn, x: y}, tn, 0)}"
            return f"({s})" if prec > 0 else s
        case TyAbs(x, body):
            avoid = {tn.get(v, v) for v in free_type_vars(body) - {x}}
            y = _pick(x, avoid)
            s = f"/\\{y}. {_term(body, rn, {**tn, x: y}, 0)}"
            return f"({s})" if prec > 0 else s
        case App(f, a):
            s = f"{_term(f, rn, tn, 1)} {_term(a, rn, tn, 2)}"
            return f"({s})" if prec >= 2 else s
        case TyApp(f, ty):
            s = f"{_term(f, rn, tn, 1)} [{print_type(ty, tn)}]"
            return f"({s})" if prec >= 2 else s
        case Proj1(a) | Proj2(a):
            op = "p1" if isinstance(t, Proj1) else "p2"
            s = f"{op} {_term(a, rn, tn, 2)}"
            return f"({s})" if prec >= 2 else s
        case Pair(a, b):
            return f"<{_term(a, rn, tn, 0)}, {_term(b, rn, tn, 0)}>"
    raise TypeError(t)


def print_context(fvs) -> str:
    """Render free variables as a ``--ctx`` string, sorted by name."""
    return ", ".join(f"{n}:{print_type(ty)}" for n, ty in sorted(fvs, key=lambda v: v[0]))
