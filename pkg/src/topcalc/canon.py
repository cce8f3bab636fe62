"""Types isomorphic to Top and their canonical inhabitants."""

from __future__ import annotations

from .syntax import (
    STAR, TOP, Abs, Arrow, Forall, Pair, Product, StarTop, Term, Top, TyAbs,
    Type, TypeVar, Var, alpha_key, positions,
)
from .typecheck import SystemId, type_of


class NotIsoTop(ValueError):
    pass


IDENTITY_STAR = TyAbs("X", Abs("x", TypeVar("X"), Var("x", TypeVar("X"))))
IDENTITY_STAR_KEY = alpha_key(IDENTITY_STAR)


def is_identity_type(ty: Type) -> bool:
    """True for ``forall X. X -> X`` up to renaming."""
    return (isinstance(ty, Forall) and isinstance(ty.body, Arrow)
            and ty.body.domain == TypeVar(ty.binder) == ty.body.codomain)


def is_iso_top(tau: Type, system: SystemId = SystemId.CD) -> bool:
    match tau:
        case Top():
            return True
        case _ if system is SystemId.NAIVE:
            return False
        case Arrow(_, cod):
            return is_iso_top(cod, system)
        case Product(a, b):
            return is_iso_top(a, system) and is_iso_top(b, system)
        case Forall(_, body) if system.polymorphic:
            if is_iso_top(body, system):
                return True
            return system is SystemId.CD2PARAM and is_identity_type(tau)
    return False


def star(tau: Type, system: SystemId = SystemId.CD) -> Term:
    """The canonical term of ``tau``; raises :class:`NotIsoTop` otherwise."""
    if not is_iso_top(tau, system):
        raise NotIsoTop(f"{tau} is not isomorphic to Top in {system.value}")
    return _star(tau, system)


def _star(tau: Type, system: SystemId) -> Term:
    match tau:
        case Top():
            return STAR
        case Arrow(dom, cod):
            return Abs("x", dom, _star(cod, system))
        case Product(a, b):
            return Pair(_star(a, system), _star(b, system))
        case Forall(x, body):
            if system is SystemId.CD2PARAM and is_identity_type(tau) and not is_iso_top(body, system):
                return TyAbs(x, Abs("x", TypeVar(x), Var("x", TypeVar(x))))
            return TyAbs(x, _star(body, system))
    raise NotIsoTop(str(tau))


def star_key(tau: Type, system: SystemId) -> str | None:
    """alpha_key of the star of ``tau``, or None when ``tau`` is not iso to Top."""
    if not is_iso_top(tau, system):
        return None
    return alpha_key(_star(tau, system))


def is_canonical_at(t: Term, tau: Type, system: SystemId) -> bool:
    k = star_key(tau, system)
    return k is not None and alpha_key(t) == k


def is_canonical(t: Term, system: SystemId = SystemId.CD) -> bool:
    return is_canonical_at(t, type_of(t, system), system)


def is_star_free(t: Term, system: SystemId = SystemId.CD) -> bool:
    """No ``*`` anywhere; polymorphically, no subterm equal to any star.

    Every star bottoms out in ``*`` except the parametric identity star, so
    only that one needs a subterm search.
    """
    for _, s in positions(t):
        if isinstance(s, StarTop):
            return False
        if (system is SystemId.CD2PARAM and isinstance(s, TyAbs)
                and alpha_key(s) == IDENTITY_STAR_KEY):
            return False
    return True


def count_stars(t: Term) -> int:
    return sum(1 for _, s in positions(t) if isinstance(s, StarTop))


__all__ = [
    "SystemId", "NotIsoTop", "IDENTITY_STAR", "is_iso_top", "star", "star_key",
    "is_canonical", "is_canonical_at", "is_star_free", "is_identity_type",
    "count_stars", "TOP",
]
