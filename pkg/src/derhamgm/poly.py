"""Multivariate polynomials and presented rings over Q.

A Ring is a finitely presented Q-algebra: ordered named variables (a subset
of which may be inverted), string relations, a monomial-order tag, and a
positive weight per variable.  Inverted variables are realized internally by
auxiliary inverse variables carrying the relation x * x__inv - 1; everything
public re-expresses those as negative exponents, so callers never see them.
"""

from fractions import Fraction

FZERO = Fraction(0)
FONE = Fraction(1)


def grevlex_key(mon):
    # graded reverse lexicographic: compare total degree, then the reversed
    # exponent vector with flipped sign; larger key = larger monomial
    return (sum(mon), tuple(-e for e in reversed(mon)))


def lex_key(mon):
    return tuple(mon)


ORDER_KEYS = {"grevlex": grevlex_key, "lex": lex_key}


def mon_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mon_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mon_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mon_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Polynomial in a ring's internal variables; no zero terms stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[m] = c

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, FZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly(self.ring)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.ring)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(other))
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mon_mul(m1, m2)
                s = out.get(m, FZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        p = Poly(self.ring)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.ring.const(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        p = Poly(self.ring)
        if c:
            p.terms = {m: v * c for m, v in self.terms.items()}
        return p

    def lead(self):
        """(monomial, coeff) maximal in the ring's order."""
        key = self.ring.order_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def weighted_degree(self):
        """Max weighted degree of the terms (None for 0)."""
        if not self.terms:
            return None
        return max(self.ring.mon_weight(m) for m in self.terms)

    def is_weight_homogeneous(self):
        degs = {self.ring.mon_weight(m) for m in self.terms}
        return len(degs) <= 1

    def derivative(self, ivar):
        """Formal partial derivative with respect to an internal variable."""
        out = {}
        for m, c in self.terms.items():
            e = m[ivar]
            if e:
                dm = list(m)
                dm[ivar] = e - 1
                dm = tuple(dm)
                s = out.get(dm, FZERO) + c * e
                if s:
                    out[dm] = s
                else:
                    out.pop(dm, None)
        p = Poly(self.ring)
        p.terms = out
        return p

    def public_derivative(self, name):
        """d/d(name) in the quotient ring: d(x^{-1}) = -x^{-2} dx is forced."""
        ring = self.ring
        i = ring.index[name]
        out = self.derivative(i)
        if name in ring.inverted:
            j = ring.index[name + "__inv"]
            inv_sq = Poly(ring, {ring.unit_mon(j, 2): -FONE})
            out = out + self.derivative(j) * inv_sq
        return out

    def evaluate(self, values):
        """Evaluate at {name: Fraction}; inverted names must be nonzero."""
        ring = self.ring
        total = FZERO
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if not e:
                    continue
                name = ring.ivars[i]
                if name.endswith("__inv"):
                    x = Fraction(values[name[:-5]])
                    v *= (1 / x) ** e
                else:
                    v *= Fraction(values[name]) ** e
            total += v
        return total

    def public_terms(self):
        """{public exponent tuple: coeff}, inverse vars folded to negatives."""
        ring = self.ring
        out = {}
        for m, c in self.terms.items():
            pub = [0] * len(ring.names)
            for i, e in enumerate(m):
                name = ring.ivars[i]
                if name.endswith("__inv"):
                    pub[ring.name_pos[name[:-5]]] -= e
                else:
                    pub[ring.name_pos[name]] += e
            key = tuple(pub)
            s = out.get(key, FZERO) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return out

    def __repr__(self):
        return format_poly(self)


class Ring:
    """Finitely presented Q-algebra with cached reduced Groebner data."""

    def __init__(self, names, inverted=(), relations=(), order="grevlex", weights=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.inverted = frozenset(inverted)
        for v in self.inverted:
            if v not in self.names:
                raise ValueError(f"inverted variable {v!r} not declared")
        if order not in ORDER_KEYS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.order = order
        self.order_key = ORDER_KEYS[order]
        self.weights = {n: 1 for n in self.names}
        if weights:
            for n, w in weights.items():
                if n not in self.weights:
                    raise ValueError(f"weight for unknown variable {n!r}")
                if int(w) <= 0:
                    raise ValueError("variable weights must be positive")
                self.weights[n] = int(w)
        self.ivars = list(self.names) + [n + "__inv" for n in self.names if n in self.inverted]
        self.index = {n: i for i, n in enumerate(self.ivars)}
        self.name_pos = {n: i for i, n in enumerate(self.names)}
        self.iweights = [
            -self.weights[n[:-5]] if n.endswith("__inv") else self.weights[n]
            for n in self.ivars
        ]
        self.relations = []
        for rel in relations:
            self.relations.append(self._coerce(rel))
        self._groebner = None
        self._lead_monomials = None
        self._std_cache = {}

    # -- construction helpers -------------------------------------------

    def _coerce(self, rel):
        if isinstance(rel, Poly):
            if rel.ring is not self:
                raise ValueError("relation from a different ring")
            return rel
        if isinstance(rel, str):
            from .parsing import parse_poly

            return parse_poly(self, rel)
        if isinstance(rel, dict):
            return self.from_public(rel)
        raise TypeError(f"cannot interpret relation {rel!r}")

    def nvars(self):
        return len(self.ivars)

    def zero_mon(self):
        return (0,) * len(self.ivars)

    def unit_mon(self, i, e=1):
        m = [0] * len(self.ivars)
        m[i] = e
        return tuple(m)

    def const(self, c):
        c = Fraction(c)
        return Poly(self, {self.zero_mon(): c} if c else {})

    def var(self, name, power=1):
        if power >= 0:
            return Poly(self, {self.unit_mon(self.index[name], power): FONE})
        if name not in self.inverted:
            raise ValueError(f"{name} is not inverted")
        return Poly(self, {self.unit_mon(self.index[name + "__inv"], -power): FONE})

    def monomial(self, public_exps, coeff=FONE):
        """Poly from a public exponent tuple (negatives on inverted vars)."""
        m = [0] * len(self.ivars)
        for name, e in zip(self.names, public_exps):
            if e >= 0:
                m[self.index[name]] = e
            else:
                if name not in self.inverted:
                    raise ValueError(f"negative exponent on non-inverted {name}")
                m[self.index[name + "__inv"]] = -e
        return Poly(self, {tuple(m): Fraction(coeff)})

    def from_public(self, terms):
        out = self.const(0)
        for exps, c in terms.items():
            out = out + self.monomial(exps, c)
        return out

    def mon_weight(self, mon):
        return sum(w * e for w, e in zip(self.iweights, mon))

    # -- quotient structure ----------------------------------------------

    def defining_ideal(self):
        """User relations plus the inversion relations x*x__inv - 1."""
        gens = list(self.relations)
        for n in self.names:
            if n in self.inverted:
                prod = mon_mul(
                    self.unit_mon(self.index[n]), self.unit_mon(self.index[n + "__inv"])
                )
                gens.append(Poly(self, {prod: FONE, self.zero_mon(): -FONE}))
        return gens

    def groebner(self):
        if self._groebner is None:
            from .groebner import reduced_groebner

            self._groebner = reduced_groebner(self.defining_ideal(), self)
            self._lead_monomials = [g.lead()[0] for g in self._groebner]
        return self._groebner

    def lead_monomials(self):
        self.groebner()
        return self._lead_monomials

    def normal_form(self, p):
        from .groebner import divide

        _, r = divide(p, self.groebner())
        return r

    def is_standard(self, mon):
        return not any(mon_divides(lt, mon) for lt in self.lead_monomials())

    def standard_monomials(self, degree, laurent_bound=None):
        """Standard monomials of exact weighted degree.

        laurent_bound caps the exponent of each inverse variable: either one
        integer for all of them or a dict keyed by the public inverted name.
        Required whenever the ring has inverted variables (positive weights
        alone cannot bound those exponents).
        """
        if isinstance(laurent_bound, dict):
            caps = {n: int(laurent_bound.get(n, 0)) for n in self.inverted}
            key = (degree, tuple(sorted(caps.items())))
        else:
            caps = {n: laurent_bound for n in self.inverted}
            key = (degree, laurent_bound)
        if key in self._std_cache:
            return self._std_cache[key]
        self.groebner()
        if self.inverted and laurent_bound is None:
            raise ValueError("laurent_bound required for rings with inverted variables")
        icaps = [
            caps[n[:-5]] if n.endswith("__inv") else None for n in self.ivars
        ]
        min_rest = [0] * (len(self.ivars) + 1)
        for i in range(len(self.ivars) - 1, -1, -1):
            w = self.iweights[i]
            min_rest[i] = min_rest[i + 1] + (w * icaps[i] if w < 0 else 0)
        out = []

        def rec(i, rest, acc):
            if i == len(self.ivars):
                if rest == 0:
                    mon = tuple(acc)
                    if self.is_standard(mon):
                        out.append(mon)
                return
            w = self.iweights[i]
            if w > 0:
                top = (rest - min_rest[i + 1]) // w
                for e in range(max(top, -1) + 1):
                    rec(i + 1, rest - w * e, acc + [e])
            else:
                for e in range(icaps[i] + 1):
                    rec(i + 1, rest - w * e, acc + [e])

        rec(0, degree, [])
        out.sort(key=self.order_key)
        self._std_cache[key] = tuple(out)
        return self._std_cache[key]

    def __repr__(self):
        vars_txt = ", ".join(
            n + ("^±1" if n in self.inverted else "") for n in self.names
        )
        rel_txt = ", ".join(format_poly(r) for r in self.relations)
        return f"Q[{vars_txt}]" + (f"/({rel_txt})" if rel_txt else "")


def format_mon(ring, mon, public=True):
    if public:
        pub = {}
        for i, e in enumerate(mon):
            name = ring.ivars[i]
            if name.endswith("__inv"):
                pub[name[:-5]] = pub.get(name[:-5], 0) - e
            elif e:
                pub[name] = pub.get(name, 0) + e
        bits = []
        for n in ring.names:
            e = pub.get(n, 0)
            if e == 1:
                bits.append(n)
            elif e:
                bits.append(f"{n}^{e}")
        return "*".join(bits) if bits else "1"
    bits = [
        f"{ring.ivars[i]}^{e}" if e > 1 else ring.ivars[i]
        for i, e in enumerate(mon)
        if e
    ]
    return "*".join(bits) if bits else "1"


def format_poly(p):
    if not p.terms:
        return "0"
    ring = p.ring
    mons = sorted(p.terms, key=ring.order_key, reverse=True)
    bits = []
    for m in mons:
        c = p.terms[m]
        mtxt = format_mon(ring, m)
        if mtxt == "1":
            term = str(c)
        elif c == 1:
            term = mtxt
        elif c == -1:
            term = "-" + mtxt
        else:
            term = f"{c}*{mtxt}"
        bits.append(term)
    out = bits[0]
    for t in bits[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
