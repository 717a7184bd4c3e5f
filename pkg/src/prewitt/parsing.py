"""Text grammar for ring elements.

Canonical output looks like ``X1 + Y1 - X0^2*Y0 - 3*X0*Y0^2``; the parser
accepts that and, more generally, any expression built from integer
literals, variables, ``+ - *``, ``^`` (or ``**``) with a non-negative integer
exponent, and parentheses.  Everything is evaluated exactly in the target
ring, so ``(X+Y)^3`` parses to its expansion.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .rings import RingDescriptor, RingElem

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, ring: RingDescriptor):
        self.text = text
        self.ring = ring
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> RingElem:
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r} in {self.text!r}")
        return v

    def expr(self) -> RingElem:
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> RingElem:
        v = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            v = v * self.unary()
        return v

    def unary(self) -> RingElem:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RingElem:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be a non-negative integer literal in {self.text!r}")
            return base ** int(val)
        return base

    def atom(self) -> RingElem:
        kind, val = self.take()
        if kind == "int":
            return self.ring.from_int(int(val))
        if kind == "name":
            if not self.ring.is_poly or val not in self.ring.vars:
                raise ParseError(f"unknown variable {val!r} for ring {self.ring}")
            return self.ring.gen(val)
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_element(text: str, ring: RingDescriptor) -> RingElem:
    return _Parser(str(text), ring).parse()


def variables_in(text: str) -> list[str]:
    """Identifiers appearing in an element expression, in order of first use."""
    seen = []
    for kind, val in tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen
