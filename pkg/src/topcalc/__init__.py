"""Typed lambda calculi with a terminal type: syntax, rewriting and checks."""

from .syntax import (
    STAR, TOP, Abs, App, Arrow, Forall, Pair, Product, Proj1, Proj2, StarTop,
    Term, Top, TyAbs, TyApp, Type, TypeVar, Var, alpha_eq,
)
from .typecheck import SystemId, TypingError, type_of

__all__ = [
    "STAR", "TOP", "Abs", "App", "Arrow", "Forall", "Pair", "Product", "Proj1",
    "Proj2", "StarTop", "Term", "Top", "TyAbs", "TyApp", "Type", "TypeVar", "Var",
    "alpha_eq", "SystemId", "TypingError", "type_of",
]
