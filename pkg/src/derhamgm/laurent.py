"""Univariate Laurent polynomials over Q.

These are the scalars of the base ring Q[t^{pm 1}] (a Euclidean domain: the
size of a nonzero element is the spread between its top and bottom exponent),
used wherever relative cohomology is manipulated as a module over a
one-dimensional base.
"""

from fractions import Fraction

FZERO = Fraction(0)


class LPoly:
    """Laurent polynomial sum c_k * t^k with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.c[k] = v

    @classmethod
    def const(cls, v):
        return cls({0: Fraction(v)})

    @classmethod
    def term(cls, v, k):
        return cls({k: Fraction(v)})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LPoly.const(other)
        return isinstance(other, LPoly) and self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __add__(self, other):
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, FZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = LPoly()
        r.c = out
        return r

    def __neg__(self):
        r = LPoly()
        r.c = {k: -v for k, v in self.c.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LPoly.const(other)
        out = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                k = k1 + k2
                s = out.get(k, FZERO) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        r = LPoly()
        r.c = out
        return r

    __rmul__ = __mul__

    def scale(self, f):
        r = LPoly()
        r.c = {k: v * f for k, v in self.c.items()} if f else {}
        return r

    def shift(self, n):
        r = LPoly()
        r.c = {k + n: v for k, v in self.c.items()}
        return r

    def val(self):
        return min(self.c) if self.c else 0

    def deg(self):
        return max(self.c) if self.c else 0

    def span(self):
        """Euclidean size: top exponent minus bottom exponent."""
        if not self.c:
            raise ValueError("zero has no span")
        return self.deg() - self.val()

    def is_unit(self):
        return len(self.c) == 1

    def unit_inverse(self):
        (k, v), = self.c.items()
        return LPoly({-k: 1 / v})

    def leading(self):
        k = self.deg()
        return k, self.c[k]

    def derivative(self):
        r = LPoly()
        r.c = {k - 1: k * v for k, v in self.c.items() if k != 0}
        return r

    def evaluate(self, x):
        x = Fraction(x)
        if x == 0 and self.val() < 0:
            raise ZeroDivisionError("pole at 0")
        return sum((v * x**k for k, v in self.c.items()), FZERO)

    def coeff(self, k):
        return self.c.get(k, FZERO)

    def divmod(self, other):
        """Euclidean division: self = q*other + r with span(r) < span(other)."""
        if not other:
            raise ZeroDivisionError
        rem = LPoly(dict(self.c))
        q = LPoly()
        dk, dv = other.leading()
        while rem and (rem.deg() - rem.val()) >= (other.deg() - other.val()):
            rk, rv = rem.leading()
            qt = LPoly({rk - dk: rv / dv})
            q = q + qt
            rem = rem - qt * other
        return q, rem

    def __repr__(self):
        return "LPoly(%s)" % format_lpoly(self, "t")


def format_lpoly(p, name):
    if not p.c:
        return "0"
    bits = []
    for k in sorted(p.c, reverse=True):
        v = p.c[k]
        if k == 0:
            term = str(v)
        else:
            pw = name if k == 1 else f"{name}^{k}"
            if v == 1:
                term = pw
            elif v == -1:
                term = f"-{pw}"
            else:
                term = f"{v}*{pw}"
        bits.append(term)
    out = bits[0]
    for t in bits[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
