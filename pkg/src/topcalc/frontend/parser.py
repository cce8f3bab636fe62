"""Recursive-descent parser for the ASCII surface syntax.

Types::

    T ::= Top | UIdent | T -> T | T * T | forall X. T | ( T )

``->`` is right associative, ``*`` binds tighter and is right associative.

Terms::

    t ::= x | * | \\x:T. t | t t | <t, t> | p1 t | p2 t | /\\X. t | t [T]
        | star T | ( t )

Binders extend as far right as possible; application is left associative.
Free variables take their types from a context such as ``"x:A, y:A->Top"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..canon import NotIsoTop, star
from ..syntax import (
    STAR, TOP, Abs, App, Arrow, Forall, Pair, Product, Proj1, Proj2, Term,
    TyAbs, TyApp, Type, TypeVar, Var,
)
from ..typecheck import SystemId

KEYWORDS = {"p1", "p2", "star", "forall", "Top"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<arrow>->)
  | (?P<tylam>/\\)
  | (?P<sym>[\\.:,<>()\[\]*])
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind if kind != "sym" else chunk, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: dict[str, Type], system: SystemId):
        self.toks = tokenize(text)
        self.i = 0
        self.ctx = ctx
        self.system = system

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(msg, tok.line, tok.column)

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.cur.kind == kind and (text is None or self.cur.text == text)

    def eat(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.cur.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        tok = self.cur
        self.i += 1
        return tok

    def finish(self) -> None:
        if not self.at("eof"):
            raise self.error(f"unexpected {self.cur.text!r}")

    # types

    def type_(self) -> Type:
        if self.at("ident", "forall"):
            self.eat("ident")
            x = self.upper_ident()
            self.eat(".")
            return Forall(x, self.type_())
        left = self.product()
        if self.at("arrow"):
            self.eat("arrow")
            return Arrow(left, self.type_())
        return left

    def product(self) -> Type:
        left = self.type_atom()
        if self.at("*"):
            self.eat("*")
            return Product(left, self.product())
        return left

    def type_atom(self) -> Type:
        if self.at("("):
            self.eat("(")
            ty = self.type_()
            self.eat(")")
            return ty
        if self.at("ident", "Top"):
            self.eat("ident")
            return TOP
        return TypeVar(self.upper_ident())

    def upper_ident(self) -> str:
        tok = self.cur
        if tok.kind != "ident" or not tok.text[0].isupper() or tok.text in KEYWORDS:
            raise self.error(f"expected a type variable, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    def lower_ident(self) -> str:
        tok = self.cur
        if tok.kind != "ident" or not tok.text[0].islower() or tok.text in KEYWORDS:
            raise self.error(f"expected a variable, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    # terms

    def term(self, env: dict[str, Type]) -> Term:
        if self.at("\\"):
            self.eat("\\")
            x = self.lower_ident()
            self.eat(":")
            ty = self.type_()
            self.eat(".")
            return Abs(x, ty, self.term({**env, x: ty}))
        if self.at("tylam"):
            self.eat("tylam")
            x = self.upper_ident()
            self.eat(".")
            return TyAbs(x, self.term(env))
        return self.application(env)

    def _starts_atom(self) -> bool:
        tok = self.cur
        if tok.kind in ("(", "<", "*"):
            return True
        return tok.kind == "ident" and tok.text[0].islower() and tok.text not in ("p1", "p2", "star")

    def application(self, env: dict[str, Type]) -> Term:
        if self.at("ident", "p1") or self.at("ident", "p2"):
            which = self.eat("ident").text
            arg = self.atom(env)
            head: Term = Proj1(arg) if which == "p1" else Proj2(arg)
        elif self.at("ident", "star"):
            tok = self.eat("ident")
            ty = self.type_atom()
            try:
                head = star(ty, self.system)
            except NotIsoTop as exc:
                raise self.error(str(exc), tok) from exc
        else:
            head = self.atom(env)
        while True:
            if self.at("["):
                self.eat("[")
                ty = self.type_()
                self.eat("]")
                head = TyApp(head, ty)
            elif self._starts_atom():
                head = App(head, self.atom(env))
            elif self.at("\\") or self.at("tylam"):
                head = App(head, self.term(env))
                return head
            else:
                return head

    def atom(self, env: dict[str, Type]) -> Term:
        tok = self.cur
        if self.at("("):
            self.eat("(")
            t = self.term(env)
            self.eat(")")
            return t
        if self.at("<"):
            self.eat("<")
            a = self.term(env)
            self.eat(",")
            b = self.term(env)
            self.eat(">")
            return Pair(a, b)
        if self.at("*"):
            self.eat("*")
            return STAR
        x = self.lower_ident()
        if x in env:
            return Var(x, env[x])
        if x in self.ctx:
            return Var(x, self.ctx[x])
        raise self.error(f"free variable {x!r} has no type in the context", tok)


def parse_type(text: str) -> Type:
    p = _Parser(text, {}, SystemId.CD2PARAM)
    ty = p.type_()
    p.finish()
    return ty


def parse_context(text: str) -> dict[str, Type]:
    """Parse ``"x:T, y:U"`` into a mapping from names to types."""
    ctx: dict[str, Type] = {}
    if not text.strip():
        return ctx
    p = _Parser(text, {}, SystemId.CD2PARAM)
    while True:
        x = p.lower_ident()
        p.eat(":")
        ctx[x] = p.type_()
        if p.at(","):
            p.eat(",")
            continue
        p.finish()
        return ctx


def parse_term(text: str, ctx: dict[str, Type] | str | None = None,
               system: SystemId = SystemId.CD2PARAM) -> Term:
    """Parse a term; ``system`` decides which types ``star T`` accepts."""
    if isinstance(ctx, str):
        ctx = parse_context(ctx)
    p = _Parser(text, dict(ctx or {}), system)
    t = p.term({})
    p.finish()
    return t
