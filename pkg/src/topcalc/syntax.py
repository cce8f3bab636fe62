"""Types and Church-style terms, binding, alpha-equivalence and substitution.

Every variable occurrence carries its type, so the type of any subterm can be
read off locally.  Bound names are never significant: comparison goes through
:func:`alpha_key`, a nameless rendering in which bound term and type variables
become de Bruijn levels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

# Fresh names carry this character; the parser never accepts it.
FRESH_MARK = "#"

_counter = itertools.count(1)


def fresh_name(base: str) -> str:
    return f"{base_name(base)}{FRESH_MARK}{next(_counter)}"


def base_name(name: str) -> str:
    return name.split(FRESH_MARK, 1)[0]


class SyntaxErrorInTerm(ValueError):
    pass


class TypeMismatch(SyntaxErrorInTerm):
    pass


class InvalidPosition(SyntaxErrorInTerm):
    pass


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "Top"


@dataclass(frozen=True)
class TypeVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Product:
    left: Type
    right: Type

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Arrow:
    domain: Type
    codomain: Type

    def __str__(self) -> str:
        return f"({self.domain} -> {self.codomain})"


@dataclass(frozen=True)
class Forall:
    binder: str
    body: Type

    def __str__(self) -> str:
        return f"(forall {self.binder}. {self.body})"


Type = Union[Top, TypeVar, Product, Arrow, Forall]

TOP = Top()


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    type: Type


@dataclass(frozen=True)
class StarTop:
    pass


@dataclass(frozen=True)
class Abs:
    binder: str
    binder_type: Type
    body: Term


@dataclass(frozen=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Pair:
    first: Term
    second: Term


@dataclass(frozen=True)
class Proj1:
    arg: Term


@dataclass(frozen=True)
class Proj2:
    arg: Term


@dataclass(frozen=True)
class TyAbs:
    binder: str
    body: Term


@dataclass(frozen=True)
class TyApp:
    fun: Term
    type_arg: Type


Term = Union[Var, StarTop, Abs, App, Pair, Proj1, Proj2, TyAbs, TyApp]

STAR = StarTop()

Position = tuple[int, ...]


def children(t: Term) -> tuple[Term, ...]:
    """Immediate subterms, in the order used by positions."""
    match t:
        case Abs(_, _, body) | TyAbs(_, body):
            return (body,)
        case App(f, a):
            return (f, a)
        case Pair(a, b):
            return (a, b)
        case Proj1(a) | Proj2(a) | TyApp(a, _):
            return (a,)
        case _:
            return ()


def with_children(t: Term, new: tuple[Term, ...]) -> Term:
    match t:
        case Abs(x, ty, _):
            return Abs(x, ty, new[0])
        case TyAbs(x, _):
            return TyAbs(x, new[0])
        case App():
            return App(new[0], new[1])
        case Pair():
            return Pair(new[0], new[1])
        case Proj1():
            return Proj1(new[0])
        case Proj2():
            return Proj2(new[0])
        case TyApp(_, ty):
            return TyApp(new[0], ty)
    return t


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        kids = children(t)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"position {list(pos)} leaves the term")
        t = kids[i]
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    kids = list(children(t))
    i = pos[0]
    if not 0 <= i < len(kids):
        raise InvalidPosition(f"position {list(pos)} leaves the term")
    kids[i] = replace_at(kids[i], pos[1:], new)
    return with_children(t, tuple(kids))


def positions(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order walk over all subterm occurrences."""
    yield prefix, t
    for i, c in enumerate(children(t)):
        yield from positions(c, prefix + (i,))


# ---------------------------------------------------------------------------
# Free variables


def type_free_vars(ty: Type) -> frozenset[str]:
    match ty:
        case TypeVar(n):
            return frozenset((n,))
        case Product(a, b) | Arrow(a, b):
            return type_free_vars(a) | type_free_vars(b)
        case Forall(x, body):
            return type_free_vars(body) - {x}
    return frozenset()


def free_vars(t: Term) -> frozenset[tuple[str, Type]]:
    """Free term variables with the annotation they carry."""
    match t:
        case Var(n, ty):
            return frozenset(((n, ty),))
        case Abs(x, _, body):
            return frozenset(v for v in free_vars(body) if v[0] != x)
        case TyAbs(_, body) | Proj1(body) | Proj2(body) | TyApp(body, _):
            return free_vars(body)
        case App(a, b) | Pair(a, b):
            return free_vars(a) | free_vars(b)
    return frozenset()


def free_var_names(t: Term) -> frozenset[str]:
    return frozenset(n for n, _ in free_vars(t))


def free_type_vars(t: Term) -> frozenset[str]:
    """Type variables free in any annotation or type argument of ``t``."""
    match t:
        case Var(_, ty):
            return type_free_vars(ty)
        case Abs(_, ty, body):
            return type_free_vars(ty) | free_type_vars(body)
        case TyAbs(x, body):
            return free_type_vars(body) - {x}
        case TyApp(f, ty):
            return free_type_vars(f) | type_free_vars(ty)
        case App(a, b) | Pair(a, b):
            return free_type_vars(a) | free_type_vars(b)
        case Proj1(a) | Proj2(a):
            return free_type_vars(a)
    return frozenset()


def all_names(t: Term) -> frozenset[str]:
    """Every term-variable name used anywhere in ``t``, bound or free."""
    names: set[str] = set()
    for _, s in positions(t):
        if isinstance(s, (Var, Abs)):
            names.add(s.name if isinstance(s, Var) else s.binder)
    return frozenset(names)


def all_type_names(t: Term) -> frozenset[str]:
    names: set[str] = set()

    def walk_type(ty: Type) -> None:
        match ty:
            case TypeVar(n):
                names.add(n)
            case Product(a, b) | Arrow(a, b):
                walk_type(a)
                walk_type(b)
            case Forall(x, body):
                names.add(x)
                walk_type(body)

    for _, s in positions(t):
        match s:
            case Var(_, ty) | Abs(_, ty, _) | TyApp(_, ty):
                walk_type(ty)
            case TyAbs(x, _):
                names.add(x)
    return frozenset(names)


# ---------------------------------------------------------------------------
# Alpha-equivalence via a nameless rendering


def _type_key(ty: Type, tenv: dict[str, int], out: list[str]) -> None:
    match ty:
        case Top():
            out.append("T")
        case TypeVar(n):
            if n in tenv:
                out.append(f"^{tenv[n]}")
            else:
                out.append(f"'{n}'")
        case Product(a, b):
            out.append("(*")
            _type_key(a, tenv, out)
            _type_key(b, tenv, out)
            out.append(")")
        case Arrow(a, b):
            out.append("(>")
            _type_key(a, tenv, out)
            _type_key(b, tenv, out)
            out.append(")")
        case Forall(x, body):
            out.append("(A")
            _type_key(body, {**tenv, x: len(tenv)}, out)
            out.append(")")


def _term_key(t: Term, env: dict[str, int], tenv: dict[str, int], out: list[str]) -> None:
    match t:
        case Var(n, ty):
            if n in env:
                out.append(f"#{env[n]}")
            else:
                out.append(f"'{n}':")
                _type_key(ty, tenv, out)
        case StarTop():
            out.append("*")
        case Abs(x, ty, body):
            out.append("(L")
            _type_key(ty, tenv, out)
            _term_key(body, {**env, x: len(env)}, tenv, out)
            out.append(")")
        case App(f, a):
            out.append("(@")
            _term_key(f, env, tenv, out)
            _term_key(a, env, tenv, out)
            out.append(")")
        case Pair(a, b):
            out.append("(<")
            _term_key(a, env, tenv, out)
            _term_key(b, env, tenv, out)
            out.append(")")
        case Proj1(a):
            out.append("(1")
            _term_key(a, env, tenv, out)
            out.append(")")
        case Proj2(a):
            out.append("(2")
            _term_key(a, env, tenv, out)
            out.append(")")
        case TyAbs(x, body):
            out.append("(/")
            _term_key(body, env, {**tenv, x: len(tenv)}, out)
            out.append(")")
        case TyApp(f, ty):
            out.append("([")
            _term_key(f, env, tenv, out)
            _type_key(ty, tenv, out)
            out.append(")")


def alpha_key(x: Term | Type) -> str:
    """Nameless canonical form; equal keys iff alpha-equivalent."""
    out: list[str] = []
    if isinstance(x, (Top, TypeVar, Product, Arrow, Forall)):
        out.append("ty:")
        _type_key(x, {}, out)
    else:
        _term_key(x, {}, {}, out)
    return "".join(out)


def alpha_eq(a: Term | Type, b: Term | Type) -> bool:
    if a is b:
        return True
    return alpha_key(a) == alpha_key(b)


def is_type(x: object) -> bool:
    return isinstance(x, (Top, TypeVar, Product, Arrow, Forall))


# ---------------------------------------------------------------------------
# Size measures


def size(t: Term) -> int:
    """Node count, ignoring type annotations."""
    return 1 + sum(size(c) for c in children(t))


def var_occurrences(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return sum(var_occurrences(c) for c in children(t))


def type_size(ty: Type) -> int:
    match ty:
        case Product(a, b) | Arrow(a, b):
            return 1 + type_size(a) + type_size(b)
        case Forall(_, body):
            return 1 + type_size(body)
    return 1


# ---------------------------------------------------------------------------
# Substitution


def subst_type_in_type(sigma: Type, x: str, phi: Type) -> Type:
    """``sigma[x := phi]``, renaming Forall binders that would capture."""
    return _subst_tt(sigma, x, phi, type_free_vars(phi))


def _subst_tt(sigma: Type, x: str, phi: Type, phi_ftv: frozenset[str]) -> Type:
    match sigma:
        case TypeVar(n):
            return phi if n == x else sigma
        case Product(a, b):
            return Product(_subst_tt(a, x, phi, phi_ftv), _subst_tt(b, x, phi, phi_ftv))
        case Arrow(a, b):
            return Arrow(_subst_tt(a, x, phi, phi_ftv), _subst_tt(b, x, phi, phi_ftv))
        case Forall(y, body):
            if y == x or x not in type_free_vars(body):
                return sigma
            if y in phi_ftv:
                y2 = fresh_name(y)
                body = _subst_tt(body, y, TypeVar(y2), frozenset((y2,)))
                y = y2
            return Forall(y, _subst_tt(body, x, phi, phi_ftv))
    return sigma


def subst_type_in_term(t: Term, x: str, phi: Type) -> Term:
    """Replace the type variable ``x`` by ``phi`` throughout ``t``."""
    return _subst_tterm(t, x, phi, type_free_vars(phi))


def _subst_tterm(t: Term, x: str, phi: Type, phi_ftv: frozenset[str]) -> Term:
    if x not in free_type_vars(t):
        return t
    match t:
        case Var(n, ty):
            return Var(n, _subst_tt(ty, x, phi, phi_ftv))
        case Abs(y, ty, body):
            return Abs(y, _subst_tt(ty, x, phi, phi_ftv), _subst_tterm(body, x, phi, phi_ftv))
        case TyAbs(y, body):
            if y == x:
                return t
            if y in phi_ftv:
                y2 = fresh_name(y)
                body = _subst_tterm(body, y, TypeVar(y2), frozenset((y2,)))
                y = y2
            return TyAbs(y, _subst_tterm(body, x, phi, phi_ftv))
        case TyApp(f, ty):
            return TyApp(_subst_tterm(f, x, phi, phi_ftv), _subst_tt(ty, x, phi, phi_ftv))
    return with_children(t, tuple(_subst_tterm(c, x, phi, phi_ftv) for c in children(t)))


def rename_bound(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of the term variable ``old`` to ``new``."""
    match t:
        case Var(n, ty):
            return Var(new, ty) if n == old else t
        case Abs(y, _, _) if y == old:
            return t
    kids = children(t)
    if not kids:
        return t
    return with_children(t, tuple(rename_bound(c, old, new) for c in kids))


def subst_term(t: Term, x: str, u: Term, u_type: Type | None = None) -> Term:
    """Capture-avoiding ``t[x := u]``.

    When ``u_type`` is given, every free occurrence of ``x`` must be annotated
    with a type alpha-equal to it, otherwise :class:`TypeMismatch` is raised.
    """
    u_fv = free_var_names(u)
    u_ftv = free_type_vars(u)
    want = alpha_key(u_type) if u_type is not None else None

    def go(s: Term) -> Term:
        match s:
            case Var(n, ty):
                if n != x:
                    return s
                if want is not None and alpha_key(ty) != want:
                    raise TypeMismatch(f"{x} is annotated {ty}, substituted term has type {u_type}")
                return u
            case StarTop():
                return s
            case Abs(y, ty, body):
                if y == x:
                    return s
                if x not in free_var_names(body):
                    return s
                if y in u_fv:
                    y2 = fresh_name(y)
                    body = rename_bound(body, y, y2)
                    y = y2
                return Abs(y, ty, go(body))
            case TyAbs(y, body):
                if x not in free_var_names(body):
                    return s
                if y in u_ftv:
                    y2 = fresh_name(y)
                    body = _subst_tterm(body, y, TypeVar(y2), frozenset((y2,)))
                    y = y2
                return TyAbs(y, go(body))
        return with_children(s, tuple(go(c) for c in children(s)))

    return go(t)
