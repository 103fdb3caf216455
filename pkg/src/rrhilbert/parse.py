"""Text form of polynomials.

Grammar (whitespace ignored, ``*`` optional between factors)::

    expr   := sign? term (sign term)*
    term   := factor ('*'? factor)*
    factor := INT ('/' INT)? | VAR ('^' INT)? | '(' expr ')' ('^' INT)?

Printing emits terms in decreasing monomial order with explicit ``*`` and
``^``, so ``parse(format(p)) == p``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .field import FieldError
from .ring import Polynomial, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect_int(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            self.error("expected an integer", tok)
        return int(tok[1])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[:2] == ("op", "*"):
                self.take()
                acc = acc * self.factor()
            elif tok[0] in ("int", "var") or tok[:2] == ("op", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                dtok = self.peek()
                den = self.expect_int()
                if den == 0:
                    raise ParseError("zero denominator", dtok[2], self.text)
                q = Fraction(num, den)
            else:
                q = Fraction(num)
            try:
                return self.ring.constant(q)
            except FieldError as exc:
                raise ParseError(str(exc), pos, self.text) from None
        if kind == "var":
            if val not in self.ring.variables:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            base = self.ring.gen(val)
            return base ** self.exponent()
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.error("expected ')'", self.tokens[self.i - 1])
            return inner ** self.exponent()
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)

    def exponent(self) -> int:
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return self.expect_int()
        return 1


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse ``text`` into a canonical polynomial of ``ring``."""
    return _Parser(text, ring).parse()


def format_monomial(exps, variables) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    F = p.ring.field
    out = []
    for exps, c in p.items():
        cs = F.fmt(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        mono = format_monomial(exps, p.ring.variables)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
