"""Recursive-descent parser for the ASCII formula grammar.

Precedence, tightest first: ``not``, ``&``, ``|``, ``->`` (right
associative).  A quantifier body extends as far right as possible.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from ..errors import FormulaSyntaxError
from .syntax import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Mem,
    Not,
    Or,
    Plus,
    Suitable,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<star>in\*|=\*)|(?P<sym>[().,&|=])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)
KEYWORDS = {"not", "exists", "forall", "in", "suitable", "plus"}

Token = Tuple[str, str, int]


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value in KEYWORDS:
            kind = "kw"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.advance()
        if tok[1] != value:
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {value!r}, found {shown!r}", tok[2])
        return tok

    def ident(self) -> str:
        tok = self.advance()
        if tok[0] != "ident":
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected a variable, found {shown!r}", tok[2])
        return tok[1]

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "not":
            self.advance()
            return Not(self.unary())
        if value in ("exists", "forall"):
            self.advance()
            var = self.ident()
            bound = None
            if self.peek()[1] == "in":
                self.advance()
                bound = self.ident()
            self.expect(".")
            body = self.formula()
            if bound is None:
                return Exists(var, body) if value == "exists" else Forall(var, body)
            if value == "exists":
                return BoundedExists(var, bound, body)
            return BoundedForall(var, bound, body)
        return self.primary()

    def primary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "(":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if value == "suitable":
            self.advance()
            self.expect("(")
            v = self.ident()
            self.expect(")")
            return Suitable(v)
        if value == "plus":
            self.advance()
            self.expect("(")
            a = self.ident()
            self.expect(",")
            b = self.ident()
            self.expect(",")
            c = self.ident()
            self.expect(")")
            return Plus(a, b, c)
        if kind == "ident":
            left = self.ident()
            op = self.advance()
            right = self.ident()
            if op[1] == "in":
                return Mem(left, right)
            if op[1] == "in*":
                return Mem(left, right, star=True)
            if op[1] == "=":
                return Eq(left, right)
            if op[1] == "=*":
                return Eq(left, right, star=True)
            raise FormulaSyntaxError(f"expected 'in' or '=', found {op[1] or 'end of input'!r}", op[2])
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise FormulaSyntaxError(f"trailing input {tok[1]!r}", tok[2])
    return phi
