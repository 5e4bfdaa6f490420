"""Recursive-descent parser for the formula grammar.

    formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" or)* ;
    or := and ("|" and)* ; and := unary ("&" unary)* ;
    unary := "~" unary | quant | atom | "(" formula ")" ;
    quant := ("exists" ["[" ("=")? INT "]"] | "forall") VAR "." unary ;
    atom := "P" INT "(" VAR ")" | "E(" VAR "," VAR ")" | VAR ("=" | "!=") VAR ;

``<->`` associates to the left and ``->`` to the right.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .syntax import (
    And,
    CountExists,
    CountExistsExact,
    Edge,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
)


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|!=|[~&|().,\[\]=])
  | (?P<pred>P(?=\d))
  | (?P<int>\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
KEYWORDS = {"exists", "forall"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "word") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not (self.tok.kind in ("op", "word") and self.tok.text == text):
            raise FormulaSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.advance()

    def var(self) -> str:
        t = self.tok
        if t.kind != "word" or t.text in KEYWORDS or t.text == "E":
            raise FormulaSyntaxError(f"expected a variable, found {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return t.text

    def integer(self) -> int:
        t = self.tok
        if t.kind != "int":
            raise FormulaSyntaxError(f"expected an integer, found {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return int(t.text)

    # grammar rules

    def formula(self) -> Formula:
        left = self.imp()
        while self.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept("|"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.accept("&"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "word" and t.text == "exists":
            self.advance()
            count: tuple[bool, int] | None = None
            if self.accept("["):
                exact = self.accept("=")
                k_pos = self.tok.pos
                k = self.integer()
                self.expect("]")
                if not exact and k == 0:
                    raise FormulaSyntaxError("exists[0] is not allowed; use exists[=0]", k_pos)
                count = (exact, k)
            v = self.var()
            self.expect(".")
            body = self.unary()
            if count is None:
                return Exists(v, body)
            exact, k = count
            return CountExistsExact(k, v, body) if exact else CountExists(k, v, body)
        if t.kind == "word" and t.text == "forall":
            self.advance()
            v = self.var()
            self.expect(".")
            return Forall(v, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "pred":
            self.advance()
            i_pos = self.tok.pos
            i = self.integer()
            if i < 1:
                raise FormulaSyntaxError("predicate indices start at 1", i_pos)
            self.expect("(")
            v = self.var()
            self.expect(")")
            return Pred(i, v)
        if t.kind == "word" and t.text == "E" and self.tokens[self.i + 1].text == "(":
            self.advance()
            self.expect("(")
            a = self.var()
            self.expect(",")
            b = self.var()
            self.expect(")")
            return Edge(a, b)
        a = self.var()
        if self.accept("="):
            return Eq(a, self.var())
        if self.accept("!="):
            return Not(Eq(a, self.var()))
        raise FormulaSyntaxError(f"expected '=' or '!=', found {self.tok.text or 'end of input'!r}", self.tok.pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise FormulaSyntaxError(f"unexpected {p.tok.text!r}", p.tok.pos)
    return f
