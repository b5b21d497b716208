"""Recursive-descent parser for the polynomial fixture grammar.

Grammar (whitespace-insensitive):
    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' integer)?
    atom   := integer | variable | '(' expr ')' | '-' factor
"""

import re

TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z0-9_]*|\*\*|[-+*^()])")


class ParseError(ValueError):
    pass


def tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad character at {pos}: {text[pos:]!r}")
            break
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, ring, tokens):
        self.ring = ring
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def expr(self):
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise ParseError(f"expected integer exponent, got {tok!r}")
            n = sign * int(tok)
            if n >= 0:
                out = self.ring.const(1)
                for _ in range(n):
                    out = out * base
                return out
            # negative exponents only parse for a bare inverted variable
            if len(base.terms) != 1:
                raise ParseError("negative exponent on a non-monomial")
            (mon, coeff), = base.terms.items()
            if coeff != 1 or sum(mon) != 1:
                raise ParseError("negative exponent on a non-variable")
            name = base.ring.ivars[[e for e in range(len(mon)) if mon[e]][0]]
            return self.ring.var(name, n)
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok == "(":
            out = self.expr()
            self.expect(")")
            return out
        if tok == "-":
            return -self.factor()
        if tok.isdigit():
            return self.ring.const(int(tok))
        if tok in self.ring.index or tok in self.ring.name_pos:
            return self.ring.var(tok)
        raise ParseError(f"unknown variable {tok!r}")


def parse_poly(ring, text):
    """Parse a polynomial string in the ring's variables."""
    p = _Parser(ring, tokenize(text))
    out = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing tokens: {p.toks[p.i:]}")
    return out
