"""Text -> MultiPoly.

Accepts sums of terms such as ``x^5 + t*x*y^6 - (1+2i)*z^15`` and, as a
superset used by the arc format, ``/`` by constants, parentheses and named
constants bound to numbers (``(4/a^7)*s^5`` with ``a`` bound).
"""

from __future__ import annotations

import re
from typing import Mapping, Sequence

from .numbers import ExactComplex, as_scalar
from .poly import MultiPoly, UnknownVariable

_TOKEN = re.compile(
    r"\s*(?:(?P<imag>\d+i)(?![A-Za-z0-9_])|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, vars, constants):
        self.text = text
        self.vars = tuple(vars)
        self.constants = dict(constants or {})
        if "i" in self.vars or "i" in self.constants:
            raise ValueError("'i' is reserved for the imaginary unit")
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise PolynomialSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def error(self, message):
        raise PolynomialSyntaxError(message, self.peek()[2], self.text)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, pos = self.take()[1], self.peek()[2]
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                c = self._as_constant(q, pos)
                if c.is_zero():
                    raise PolynomialSyntaxError("division by zero", pos, self.text)
                p = p.scale(1 / c)
        return p

    def _as_constant(self, q: MultiPoly, pos):
        if not q.terms:
            return ExactComplex(0)
        if list(q.terms) != [(0,) * len(self.vars)]:
            raise PolynomialSyntaxError("division by a non-constant expression", pos, self.text)
        return q.terms[(0,) * len(self.vars)]

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            kind, val, pos = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer literal", pos, self.text)
            k = int(val)
            if neg:
                c = self._as_constant(base, pos)
                if c.is_zero():
                    raise PolynomialSyntaxError("negative power of zero", pos, self.text)
                return MultiPoly.constant(self.vars, c ** (-k))
            return base ** k
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.constant(self.vars, int(val))
        if kind == "imag":
            return MultiPoly.constant(self.vars, ExactComplex(0, int(val[:-1])))
        if kind == "ident":
            if val == "i":
                return MultiPoly.constant(self.vars, ExactComplex(0, 1))
            if val in self.vars:
                return MultiPoly.variable(self.vars, val)
            if val in self.constants:
                return MultiPoly.constant(self.vars, as_scalar(self.constants[val]))
            raise UnknownVariable(f"unknown variable {val!r} at position {pos}")
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_polynomial(
    text: str, vars: Sequence[str], constants: Mapping[str, object] | None = None
) -> MultiPoly:
    """Parse ``text`` into a polynomial over ``vars``.

    ``constants`` binds extra identifiers to numbers; they may appear in
    denominators and under negative powers.
    """
    return _Parser(text, vars, constants).parse()
