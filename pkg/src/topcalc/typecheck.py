"""Type synthesis for Church-style terms in each rule system."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import (
    TOP, Abs, App, Arrow, Forall, Pair, Position, Product, Proj1, Proj2,
    StarTop, Term, TyAbs, TyApp, Type, Var, alpha_key, free_vars,
    subst_type_in_type, subterm_at, type_free_vars,
)


class SystemId(Enum):
    NAIVE = "naive"
    CD = "cd"
    CD2 = "cd2"
    CD2PARAM = "cd2param"

    @property
    def polymorphic(self) -> bool:
        return self in (SystemId.CD2, SystemId.CD2PARAM)


class TypingErrorKind(Enum):
    ANNOTATION_MISMATCH = "annotation-mismatch"
    NON_FUNCTION_APPLICATION = "non-function-application"
    NON_PRODUCT_PROJECTION = "non-product-projection"
    NON_POLYMORPHIC_APPLICATION = "non-polymorphic-application"
    EIGENVARIABLE_VIOLATION = "eigenvariable-violation"
    POLYMORPHISM_IN_SIMPLY_TYPED_SYSTEM = "polymorphism-in-simply-typed-system"


@dataclass
class TypingError(Exception):
    kind: TypingErrorKind
    position: Position
    detail: str

    def __str__(self) -> str:
        return f"{self.kind.value} at {list(self.position)}: {self.detail}"


def _has_forall(ty: Type) -> bool:
    match ty:
        case Forall():
            return True
        case Product(a, b) | Arrow(a, b):
            return _has_forall(a) or _has_forall(b)
    return False


def type_of(t: Term, system: SystemId = SystemId.CD) -> Type:
    """Synthesize the type of ``t`` or raise :class:`TypingError`.

    Bound variables shadow outer binders of the same name.  Free variables
    sharing a name must agree on their annotation.
    """
    free_seen: dict[str, tuple[str, Type]] = {}

    def check_type(ty: Type, pos: Position) -> None:
        if not system.polymorphic and _has_forall(ty):
            raise TypingError(TypingErrorKind.POLYMORPHISM_IN_SIMPLY_TYPED_SYSTEM, pos,
                              f"quantified type {ty}")

    def go(s: Term, env: dict[str, Type], pos: Position) -> Type:
        match s:
            case Var(n, ty):
                check_type(ty, pos)
                if n in env:
                    if alpha_key(env[n]) != alpha_key(ty):
                        raise TypingError(TypingErrorKind.ANNOTATION_MISMATCH, pos,
                                          f"{n} bound at {env[n]} but annotated {ty}")
                else:
                    k = alpha_key(ty)
                    prev = free_seen.setdefault(n, (k, ty))
                    if prev[0] != k:
                        raise TypingError(TypingErrorKind.ANNOTATION_MISMATCH, pos,
                                          f"free {n} annotated both {prev[1]} and {ty}")
                return ty
            case StarTop():
                return TOP
            case Abs(x, ty, body):
                check_type(ty, pos)
                return Arrow(ty, go(body, {**env, x: ty}, pos + (0,)))
            case App(f, a):
                ft = go(f, env, pos + (0,))
                at = go(a, env, pos + (1,))
                if not isinstance(ft, Arrow):
                    raise TypingError(TypingErrorKind.NON_FUNCTION_APPLICATION, pos,
                                      f"applying a term of type {ft}")
                if alpha_key(ft.domain) != alpha_key(at):
                    raise TypingError(TypingErrorKind.ANNOTATION_MISMATCH, pos,
                                      f"function expects {ft.domain}, argument has {at}")
                return ft.codomain
            case Pair(a, b):
                return Product(go(a, env, pos + (0,)), go(b, env, pos + (1,)))
            case Proj1(a) | Proj2(a):
                at = go(a, env, pos + (0,))
                if not isinstance(at, Product):
                    raise TypingError(TypingErrorKind.NON_PRODUCT_PROJECTION, pos,
                                      f"projecting from {at}")
                return at.left if isinstance(s, Proj1) else at.right
            case TyAbs(x, body):
                if not system.polymorphic:
                    raise TypingError(TypingErrorKind.POLYMORPHISM_IN_SIMPLY_TYPED_SYSTEM, pos,
                                      "type abstraction")
                bt = go(body, env, pos + (0,))
                for name, ty in free_vars(body):
                    if x in type_free_vars(ty):
                        raise TypingError(TypingErrorKind.EIGENVARIABLE_VIOLATION, pos,
                                          f"{x} is free in the type {ty} of free variable {name}")
                return Forall(x, bt)
            case TyApp(f, ty):
                if not system.polymorphic:
                    raise TypingError(TypingErrorKind.POLYMORPHISM_IN_SIMPLY_TYPED_SYSTEM, pos,
                                      "type application")
                check_type(ty, pos)
                ft = go(f, env, pos + (0,))
                if not isinstance(ft, Forall):
                    raise TypingError(TypingErrorKind.NON_POLYMORPHIC_APPLICATION, pos,
                                      f"instantiating a term of type {ft}")
                return subst_type_in_type(ft.body, ft.binder, ty)
        raise TypeError(f"not a term: {s!r}")

    return go(t, {}, ())


def well_typed(t: Term, system: SystemId = SystemId.CD) -> bool:
    try:
        type_of(t, system)
    except TypingError:
        return False
    return True


def synth(t: Term) -> Type:
    """Unchecked synthesis for terms already known to be well typed."""
    match t:
        case Var(_, ty):
            return ty
        case StarTop():
            return TOP
        case Abs(_, ty, body):
            return Arrow(ty, synth(body))
        case App(f, _):
            return synth(f).codomain
        case Pair(a, b):
            return Product(synth(a), synth(b))
        case Proj1(a):
            return synth(a).left
        case Proj2(a):
            return synth(a).right
        case TyAbs(x, body):
            return Forall(x, synth(body))
        case TyApp(f, ty):
            ft = synth(f)
            return subst_type_in_type(ft.body, ft.binder, ty)
    raise TypeError(f"not a term: {t!r}")


def type_at(t: Term, pos: Position, system: SystemId = SystemId.CD) -> Type:
    """Type of the subterm at ``pos``; annotations make context unnecessary."""
    type_of(t, system)
    return synth(subterm_at(t, pos))


__all__ = [
    "SystemId", "TypingError", "TypingErrorKind", "type_of", "well_typed",
    "synth", "type_at",
]
