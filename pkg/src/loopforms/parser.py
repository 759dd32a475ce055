"""Recursive-descent parser for the expression language.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | NAME "_" INT | "(" expr ")"

``NAME`` is a coordinate name and ``NAME_k`` its k-th x-derivative.  Rational
literals are written as ``a/b``.  Denominators and negative powers may not
contain jet variables of order >= 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SemanticError
from .jet import JetExpression
from .poly import PolyRing

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)(?:_(?P<order>\d+))?|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int
    order: int | None = None


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    n = len(src)
    while True:
        while pos < n and src[pos].isspace():
            pos += 1
        if pos >= n:
            out.append(Token("end", "", pos))
            return out
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", src, pos)
        if m.group("int") is not None:
            out.append(Token("int", m.group("int"), m.start("int")))
        elif m.group("name") is not None:
            order = m.group("order")
            out.append(Token("name", m.group("name"), m.start("name"), int(order) if order is not None else None))
        else:
            out.append(Token("op", m.group("op"), m.start("op")))
        pos = m.end()


class _Parser:
    def __init__(self, src: str, ring: PolyRing):
        self.src = src
        self.ring = ring
        self.toks = tokenize(src)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def advance(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.src, tok.pos)

    def expect(self, text: str):
        if self.tok.kind != "op" or self.tok.text != text:
            what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.error(f"expected {text!r}, found {what}")
        return self.advance()

    def parse(self) -> JetExpression:
        if self.tok.kind == "end":
            self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> JetExpression:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> JetExpression:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op_tok = self.advance()
            rhs_tok = self.tok
            rhs = self.unary()
            if op_tok.text == "*":
                e = e * rhs
            else:
                e = self._divide(e, rhs, rhs_tok)
        return e

    def _divide(self, e, rhs, tok) -> JetExpression:
        if not rhs.is_ratfun():
            raise SemanticError("division by an expression containing jet variables", self.src, tok.pos)
        d = rhs.as_ratfun()
        if d.is_zero():
            raise SemanticError("division by zero", self.src, tok.pos)
        return e * d.inverse()

    def unary(self) -> JetExpression:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            e = self.unary()
            return -e if op == "-" else e
        return self.power()

    def power(self) -> JetExpression:
        base_tok = self.tok
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            neg = False
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                neg = True
            if self.tok.kind != "int":
                self.error("exponent must be an integer literal")
            ex = int(self.advance().text)
            if neg:
                if not base.is_ratfun():
                    raise SemanticError("negative power of a jet variable", self.src, base_tok.pos)
                b = base.as_ratfun()
                if b.is_zero():
                    raise SemanticError("negative power of zero", self.src, base_tok.pos)
                return JetExpression.from_ratfun(b.inverse() ** ex)
            return base ** ex
        return base

    def atom(self) -> JetExpression:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return JetExpression.const(self.ring, int(t.text))
        if t.kind == "name":
            self.advance()
            try:
                i = self.ring.names.index(t.text)
            except ValueError:
                raise SemanticError(f"unknown coordinate {t.text!r}", self.src, t.pos) from None
            return JetExpression.jet(self.ring, i, t.order or 0)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")


def parse_expr(src: str, context) -> JetExpression:
    """Parse ``src`` over the coordinates ``context`` (names or a PolyRing)."""
    ring = context if isinstance(context, PolyRing) else PolyRing(context)
    return _Parser(src, ring).parse()


def parse_ratfun(src: str, context):
    """Parse an expression that must be free of jet variables."""
    e = parse_expr(src, context)
    if not e.is_ratfun():
        raise SemanticError("jet variables are not allowed here", src, 0)
    return e.as_ratfun()
