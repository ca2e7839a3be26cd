"""Expression text: parsing and deterministic formatting.

Grammar (whitespace insignificant):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*            (plus '/' in rational mode)
    factor := atom ('^' uint)?
    atom   := rationalLiteral | 't' | identifier | '(' expr ')'
    rationalLiteral := int ('/' uint)?

A '/' directly between two integer literals is always consumed as one
rational literal, so the literal is the atom and '^' binds to it as a
whole.  In rational mode '/' is additionally an operator at term level,
which admits map components such as 1/x.  Element mode is rational mode
with no variables (only t is allowed, and only over Q(t)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ExprSyntaxError,
    IdenticallyZeroDenominator,
    TInQField,
    UnknownVariable,
)
from .field import BaseField, FieldElement
from .poly import MultiPoly, reduce_fraction

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")

_INT, _NAME, _OP, _END = "int", "name", "op", "end"


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        m = _TOKEN_RE.match(src, i)
        if m is None or m.end() == m.start():
            j = i
            while j < n and src[j].isspace():
                j += 1
            if j >= n:
                break
            raise ExprSyntaxError(f"unexpected character {src[j]!r}", j)
        if m.group(1) is not None:
            tokens.append(_Token(_INT, m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token(_NAME, m.group(2), m.start(2)))
        else:
            tokens.append(_Token(_OP, m.group(3), m.start(3)))
        i = m.end()
    tokens.append(_Token(_END, "", n))
    return tokens


class _Parser:
    """Recursive descent over (numerator, denominator) polynomial pairs."""

    def __init__(self, src: str, field: BaseField, var_names: Sequence[str], allow_div: bool):
        self.src = src
        self.field = field
        self.vars = {name: i for i, name in enumerate(var_names)}
        self.nvars = len(var_names)
        self.allow_div = allow_div
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _const(self, value) -> MultiPoly:
        return MultiPoly.const(self.field, self.nvars, value)

    def _one(self) -> MultiPoly:
        return self._const(1)

    def parse(self) -> tuple[MultiPoly, MultiPoly]:
        num, den = self.expr()
        tok = self.peek()
        if tok.kind != _END:
            raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.pos)
        return num, den

    def expr(self) -> tuple[MultiPoly, MultiPoly]:
        tok = self.peek()
        negate = False
        if tok.kind == _OP and tok.text == "-":
            self.next()
            negate = True
        num, den = self.term()
        if negate:
            num = -num
        while True:
            tok = self.peek()
            if tok.kind != _OP or tok.text not in "+-":
                return num, den
            self.next()
            n2, d2 = self.term()
            if tok.text == "-":
                n2 = -n2
            num, den = num * d2 + n2 * den, den * d2

    def term(self) -> tuple[MultiPoly, MultiPoly]:
        num, den = self.factor()
        while True:
            tok = self.peek()
            if tok.kind != _OP or tok.text not in "*/":
                return num, den
            if tok.text == "/" and not self.allow_div:
                raise ExprSyntaxError("'/' is only valid inside a rational literal", tok.pos)
            self.next()
            n2, d2 = self.factor()
            if tok.text == "*":
                num, den = num * n2, den * d2
            else:
                if n2.is_zero:
                    raise IdenticallyZeroDenominator(
                        f"division by an identically zero expression (offset {tok.pos})"
                    )
                num, den = num * d2, den * n2

    def factor(self) -> tuple[MultiPoly, MultiPoly]:
        num, den = self.atom()
        tok = self.peek()
        if tok.kind == _OP and tok.text == "^":
            self.next()
            etok = self.next()
            if etok.kind != _INT:
                raise ExprSyntaxError("exponent must be a nonnegative integer", etok.pos)
            e = int(etok.text)
            num, den = num**e, den**e
        return num, den

    def atom(self) -> tuple[MultiPoly, MultiPoly]:
        tok = self.next()
        if tok.kind == _INT:
            value = Fraction(int(tok.text))
            nxt = self.peek()
            if (
                nxt.kind == _OP
                and nxt.text == "/"
                and self.tokens[self.i + 1].kind == _INT
            ):
                self.next()
                dtok = self.next()
                d = int(dtok.text)
                if d == 0:
                    raise ExprSyntaxError("zero denominator in rational literal", dtok.pos)
                value = Fraction(int(tok.text), d)
            return self._const(value), self._one()
        if tok.kind == _NAME:
            if tok.text == "t":
                if not self.field.has_t:
                    raise TInQField(tok.pos)
                return self._const(self.field.t), self._one()
            idx = self.vars.get(tok.text)
            if idx is None:
                raise UnknownVariable(tok.text, tok.pos)
            return MultiPoly.var(self.field, self.nvars, idx), self._one()
        if tok.kind == _OP and tok.text == "(":
            num, den = self.expr()
            closing = self.next()
            if closing.kind != _OP or closing.text != ")":
                raise ExprSyntaxError("expected ')'", closing.pos)
            return num, den
        raise ExprSyntaxError(
            f"expected a value, found {tok.text!r}" if tok.kind != _END else "unexpected end of input",
            tok.pos,
        )


def parse_poly(src: str, var_names: Sequence[str], field: BaseField) -> MultiPoly:
    """Parse a polynomial under the strict grammar (no '/' operator)."""
    num, den = _Parser(src, field, var_names, allow_div=False).parse()
    c = den.constant_value()
    return num if c.is_one else num * c.inverse()


def parse_rational(
    src: str, var_names: Sequence[str], field: BaseField
) -> tuple[MultiPoly, MultiPoly]:
    """Parse a rational expression; returns canonical (num, den)."""
    num, den = _Parser(src, field, var_names, allow_div=True).parse()
    return reduce_fraction(num, den)


def parse_element(src: str, field: BaseField) -> FieldElement:
    """Parse a base field element: rationals over Q, rational functions of t over Q(t)."""
    num, den = _Parser(src, field, (), allow_div=True).parse()
    nv = num.constant_value()
    dv = den.constant_value()
    return nv / dv


def parse_point(src: str, field: BaseField) -> tuple[FieldElement, ...]:
    """Parse a comma-separated tuple of base field elements."""
    parts = src.split(",")
    return tuple(parse_element(part, field) for part in parts)


_BARE_DENOM_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*(\^\d+)?$")


def _term_body(coeff: FieldElement, mono, names: Sequence[str]) -> str:
    vparts = []
    for i, e in enumerate(mono):
        if e == 1:
            vparts.append(names[i])
        elif e > 1:
            vparts.append(f"{names[i]}^{e}")
    if not vparts:
        return coeff.format(as_factor=True)
    if coeff.is_one:
        return "*".join(vparts)
    return coeff.format(as_factor=True) + "*" + "*".join(vparts)


def format_poly(p: MultiPoly, names: Sequence[str]) -> str:
    """Deterministic rendering: grevlex-descending terms, signs extracted."""
    if len(names) != p.nvars:
        raise ValueError(f"{len(names)} names for {p.nvars} variables")
    if p.is_zero:
        return "0"
    pieces = []
    for mono, coeff in p.sorted_terms():
        neg = coeff.is_negative_leading
        mag = -coeff if neg else coeff
        body = _term_body(mag, mono, names)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def format_rational(num: MultiPoly, den: MultiPoly, names: Sequence[str]) -> str:
    """Render num/den; assumes the canonical form from reduce_fraction."""
    if den.is_constant:
        c = den.constant_value()
        p = num if c.is_one else num * c.inverse()
        return format_poly(p, names)
    num_s = format_poly(num, names)
    if len(num.terms) > 1:
        num_s = f"({num_s})"
    den_s = format_poly(den, names)
    if not _BARE_DENOM_RE.match(den_s):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


def format_element(e: FieldElement) -> str:
    return e.format()
