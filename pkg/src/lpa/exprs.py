"""Parser for algebra expressions.

Grammar: sums of juxtaposed factors, integer or integer/integer scalars,
parentheses, and a postfix * that applies the involution to the preceding
atom or group.  Example: ``(e1 + e2)* (e1 + e2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import cohn

TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_']*)"
                      r"|(?P<num>\d+)"
                      r"|(?P<op>[+\-()*/]))")


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__("at position %d: %s" % (pos, message))
        self.pos = pos


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("unexpected character %r" % text[pos:].lstrip()[0], pos)
            break
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        elif m.group("num"):
            tokens.append(("num", int(m.group("num")), m.start("num")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, ctx, text):
        self.ctx = ctx
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        x = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected %r" % (val,), pos)
        return x

    def expr(self):
        negate = False
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        x = self.term()
        if negate:
            x = -x
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                y = self.term()
                x = x - y if val == "-" else x + y
            else:
                return x

    def term(self):
        x = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind in ("ident", "num") or (kind == "op" and val == "("):
                x = x * self.factor()
            else:
                return x

    def factor(self):
        x = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                x = x.star()
            else:
                return x

    def atom(self):
        kind, val, pos = self.next()
        if kind == "ident":
            try:
                return cohn.generator(self.ctx, val)
            except cohn.AlgebraError as exc:
                raise ParseError(str(exc), pos) from None
        if kind == "num":
            num = val
            kind2, val2, _ = self.peek()
            if kind2 == "op" and val2 == "/":
                self.next()
                kind3, val3, pos3 = self.next()
                if kind3 != "num":
                    raise ParseError("expected an integer denominator", pos3)
                if val3 == 0:
                    raise ParseError("zero denominator", pos3)
                return cohn.unit(self.ctx).scale(Fraction(num, val3))
            return cohn.unit(self.ctx).scale(num)
        if kind == "op" and val == "(":
            x = self.expr()
            kind2, val2, pos2 = self.next()
            if not (kind2 == "op" and val2 == ")"):
                raise ParseError("unbalanced parenthesis", pos2)
            return x
        raise ParseError("unexpected %r" % (val,), pos)


def parse_expression(ctx: "cohn.AlgebraContext", text: str) -> "cohn.Element":
    """Parse and evaluate an expression in the given algebra context."""
    return _Parser(ctx, text).parse()
