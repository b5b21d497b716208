"""Free resolutions by Schreyer syzygies on module Groebner bases.

Elements of a free module over a presented ring are dicts
{(position, monomial): Fraction}.  The module order is position-over-term
(e_0 > e_1 > ...), with the ring's monomial order breaking ties inside one
position.  Syzygies come from Schreyer's theorem: reduce every same-position
S-pair of the final Groebner basis to zero and keep the relation.
"""

from fractions import Fraction

from .groebner import divide as poly_divide
from .poly import Poly, mon_div, mon_divides, mon_lcm, mon_mul

FZERO = Fraction(0)
FONE = Fraction(1)


class DegreeBoundError(ValueError):
    """Raised when syzygy generators exceed the declared degree bound."""


def mod_zero():
    return {}


def mod_axpy(acc, coeff_poly, elem):
    """acc += coeff_poly * elem for a ring-coefficient multiplier."""
    for (pos, mon), c in elem.items():
        for m2, c2 in coeff_poly.terms.items():
            key = (pos, mon_mul(mon, m2))
            s = acc.get(key, FZERO) + c * c2
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return acc


def mod_scale_term(elem, mon, coeff):
    out = {}
    for (pos, m), c in elem.items():
        out[(pos, mon_mul(m, mon))] = c * coeff
    return out


def mod_sub(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, FZERO) - c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mod_lead(elem, ring):
    key = ring.order_key
    best = max(elem, key=lambda pm: (-pm[0], key(pm[1])))
    return best, elem[best]


def mod_divide(elem, divisors, ring, track=False):
    """Module division; returns (quotient polys, remainder)."""
    key = ring.order_key
    leads = [mod_lead(d, ring) if d else None for d in divisors]
    quotients = [ring.const(0) for _ in divisors] if track else None
    remainder = {}
    work = dict(elem)
    while work:
        pm = max(work, key=lambda t: (-t[0], key(t[1])))
        pos, mon = pm
        c = work.pop(pm)
        hit = False
        for i, ld in enumerate(leads):
            if ld is None:
                continue
            (dpos, dmon), dc = ld
            if dpos == pos and mon_divides(dmon, mon):
                factor = Poly(ring, {mon_div(mon, dmon): c / dc})
                if track:
                    quotients[i] = quotients[i] + factor
                prod = {}
                mod_axpy(prod, factor, divisors[i])
                for kk, cc in prod.items():
                    if kk == pm:
                        continue
                    s = work.get(kk, FZERO) - cc
                    if s:
                        work[kk] = s
                    else:
                        work.pop(kk, None)
                hit = True
                break
        if not hit:
            remainder[pm] = c
    return quotients, remainder


def module_groebner(gens, ring):
    """Groebner basis of a submodule, with change-of-basis certificates.

    Returns (gb, A, B) where gens[i] = sum_j A[i][j] * gb[j] and
    gb[j] = sum_i B[j][i] * gens[i], all coefficients ring elements.
    """
    basis = []
    combos = []  # over input gens
    for i, g in enumerate(gens):
        if g:
            basis.append(dict(g))
            combos.append({i: ring.const(1)})
    pairs = [
        (i, j)
        for i in range(len(basis))
        for j in range(i + 1, len(basis))
        if mod_lead(basis[i], ring)[0][0] == mod_lead(basis[j], ring)[0][0]
    ]
    while pairs:
        i, j = pairs.pop(0)
        s = _spair(basis[i], basis[j], ring)
        if s is None:
            continue
        spoly, ti, tj = s
        qs, r = mod_divide(spoly, basis, ring, track=True)
        if not r:
            continue
        combo = {}
        _combo_acc(combo, ti, combos[i], ring)
        _combo_acc(combo, -tj, combos[j], ring)
        for k, q in enumerate(qs):
            if q:
                _combo_acc(combo, -q, combos[k], ring)
        new = len(basis)
        basis.append(r)
        combos.append(combo)
        lead_pos = mod_lead(r, ring)[0][0]
        pairs.extend(
            (k, new)
            for k in range(new)
            if mod_lead(basis[k], ring)[0][0] == lead_pos
        )
    # A: divide each generator by the basis
    A = []
    for g in gens:
        qs, r = mod_divide(g, basis, ring, track=True)
        if r:
            raise AssertionError("generator failed to reduce against its own GB")
        A.append(qs)
    B = [[combo.get(i, ring.const(0)) for i in range(len(gens))] for combo in combos]
    return basis, A, B


def _spair(f, g, ring):
    (fpos, fmon), fc = mod_lead(f, ring)
    (gpos, gmon), gc = mod_lead(g, ring)
    if fpos != gpos:
        return None
    lcm = mon_lcm(fmon, gmon)
    tf = Poly(ring, {mon_div(lcm, fmon): FONE / fc})
    tg = Poly(ring, {mon_div(lcm, gmon): FONE / gc})
    sp = {}
    mod_axpy(sp, tf, f)
    neg = {}
    mod_axpy(neg, tg, g)
    return mod_sub(sp, neg), tf, tg


def _combo_acc(combo, mult, cof, ring):
    if isinstance(mult, Poly) and not mult:
        return
    for i, c in cof.items():
        term = mult * c
        if i in combo:
            term = combo[i] + term
        if term:
            combo[i] = term
        else:
            combo.pop(i, None)


def schreyer_syzygies(gb, ring):
    """Syzygies of a module Groebner basis, one per same-position S-pair."""
    out = []
    for i in range(len(gb)):
        for j in range(i + 1, len(gb)):
            s = _spair(gb[i], gb[j], ring)
            if s is None:
                continue
            spoly, ti, tj = s
            qs, r = mod_divide(spoly, gb, ring, track=True)
            if r:
                raise AssertionError("S-pair of a Groebner basis must reduce to zero")
            syz = {}
            _mod_poly_acc(syz, i, ti)
            _mod_poly_acc(syz, j, -tj)
            for k, q in enumerate(qs):
                if q:
                    _mod_poly_acc(syz, k, -q)
            if syz:
                out.append(syz)
    return out


def _mod_poly_acc(elem, pos, poly):
    for m, c in poly.terms.items():
        key = (pos, m)
        s = elem.get(key, FZERO) + c
        if s:
            elem[key] = s
        else:
            elem.pop(key, None)


def syzygy_generators(gens, ring):
    """Generators of the syzygy module of gens inside its free cover."""
    live = [(i, g) for i, g in enumerate(gens) if g]
    if not live:
        return []
    gb, A, B = module_groebner([g for _, g in live], ring)
    raw = []
    for u in schreyer_syzygies(gb, ring):
        syz = {}
        for (j, mon), c in u.items():
            mult = Poly(ring, {mon: c})
            for i, coeff in enumerate(B[j]):
                if coeff:
                    _mod_poly_acc(syz, live[i][0], mult * coeff)
        if syz:
            raw.append(syz)
    # identity-minus-AB rows catch syzygies among redundant generators
    for i in range(len(live)):
        row = {}
        _mod_poly_acc(row, live[i][0], ring.const(1))
        for j, q in enumerate(A[i]):
            if q:
                for t, coeff in enumerate(B[j]):
                    if coeff:
                        _mod_poly_acc(row, live[t][0], -(q * coeff))
        if row:
            raw.append(row)
    # normal-form the coefficients and drop duplicates
    out = []
    seen = set()
    for s in raw:
        canon = _normalize_syzygy(s, ring)
        if canon is None:
            continue
        key = tuple(sorted(canon.items(), key=lambda kv: (kv[0][0], kv[0][1])))
        if key not in seen:
            seen.add(key)
            out.append(canon)
    return out


def _normalize_syzygy(s, ring):
    nf_terms = {}
    by_pos = {}
    for (pos, mon), c in s.items():
        by_pos.setdefault(pos, {})[mon] = c
    for pos, terms in by_pos.items():
        p = Poly(ring)
        p.terms = dict(terms)
        p = ring.normal_form(p)
        for m, c in p.terms.items():
            nf_terms[(pos, m)] = c
    if not nf_terms:
        return None
    # scale so the lead coefficient is 1
    _, lc = mod_lead(nf_terms, ring)
    return {k: v / lc for k, v in nf_terms.items()}


class FreeResolution:
    """Chain of free modules F_0 <- F_1 <- ... with graded generator data."""

    def __init__(self, ring, gen_degrees, differentials):
        self.ring = ring
        self.gen_degrees = gen_degrees  # list per homological level
        self.differentials = differentials  # level j: columns over F_{j-1}

    @property
    def length(self):
        return len(self.gen_degrees) - 1

    def ranks(self):
        return [len(d) for d in self.gen_degrees]

    def verify_composites(self):
        """d_{j} o d_{j+1} = 0, exactly, as module elements."""
        for j in range(1, len(self.differentials)):
            prev = self.differentials[j - 1]
            for col in self.differentials[j]:
                acc = {}
                for (pos, mon), c in col.items():
                    mult = Poly(self.ring, {mon: c})
                    mod_axpy(acc, mult, prev[pos])
                acc = {
                    k: v
                    for k, v in _nf_elem(acc, self.ring).items()
                }
                if acc:
                    return False
        return True

    def element_degree(self, level, elem):
        degs = {
            self.gen_degrees[level][pos] + self.ring.mon_weight(mon)
            for (pos, mon) in elem
        }
        if len(degs) != 1:
            raise ValueError("inhomogeneous module element")
        return degs.pop()


def _nf_elem(elem, ring):
    out = {}
    by_pos = {}
    for (pos, mon), c in elem.items():
        by_pos.setdefault(pos, {})[mon] = c
    for pos, terms in by_pos.items():
        p = Poly(ring)
        p.terms = terms
        p = ring.normal_form(p)
        for m, c in p.terms.items():
            out[(pos, m)] = c
    return out


def free_resolution(ring, presentation, gen_degrees0, length, degree_bound=None):
    """Resolve coker(presentation) by iterated Schreyer syzygies.

    presentation: columns (module elements) inside the rank-len(gen_degrees0)
    free module F_0.  Returns a FreeResolution with F_0 at level 0 and
    differentials d_1 = presentation, d_2, ..., d_length (or shorter when the
    syzygies run out).
    """
    if ring.relations or ring.inverted:
        raise ValueError("free resolutions are computed over free polynomial rings")
    gen_degrees = [list(gen_degrees0)]
    differentials = []
    current = [dict(col) for col in presentation]
    for level in range(1, length + 1):
        if not current:
            break
        differentials.append(current)
        degs = [_column_degree(ring, gen_degrees[-1], col) for col in current]
        gen_degrees.append(degs)
        if degree_bound is not None:
            too_big = [d for d in degs if d is not None and d > degree_bound]
            if too_big:
                raise DegreeBoundError(
                    f"syzygy generators of degree {sorted(too_big)} exceed the "
                    f"declared degree bound {degree_bound}; raise the bound"
                )
        if level == length:
            break
        current = syzygy_generators(current, ring)
    return FreeResolution(ring, gen_degrees, differentials)


def _column_degree(ring, src_degrees, col):
    degs = {src_degrees[pos] + ring.mon_weight(mon) for (pos, mon) in col}
    if len(degs) == 1:
        return degs.pop()
    return None  # inhomogeneous presentation: degree bookkeeping disabled
