"""Ring towers Q -> R -> S and the relative de Rham complex as R-modules.

A tower presents S over a base R by splitting the variable set: base
variables (with their own presentation, possibly Laurent) and fiber
variables subject to fiber relations.  Relative computations never truncate
the base direction: elements are stored as fiber monomials with exact
coefficients in R, so kernels, images, and freeness certificates over a
one-dimensional base are Smith-normal-form computations over Q[t^{pm 1}].

The fiber relations must form a monic rewrite system (each relation solves
its lex-leading fiber monomial with a unit coefficient); all shipped towers
have at most one such relation.
"""

from fractions import Fraction

from .laurent import LPoly
from .poly import Poly, Ring
from .smith import LaurentDomain, kernel_over, smith_normal_form, solve_over

FZERO = Fraction(0)
FONE = Fraction(1)


class Tower:
    """Q -> R -> S with disjoint base/fiber variable names."""

    def __init__(self, base_ring, fiber_vars, fiber_relations, fiber_weights=None,
                 name=None, canonical_h1=None):
        self.base_ring = base_ring
        self.fiber_vars = tuple(fiber_vars)
        overlap = set(base_ring.names) & set(self.fiber_vars)
        if overlap:
            raise ValueError(f"base/fiber variables overlap: {overlap}")
        weights = dict(base_ring.weights)
        if fiber_weights:
            weights.update(fiber_weights)
        self.total_ring = Ring(
            list(base_ring.names) + list(self.fiber_vars),
            inverted=sorted(base_ring.inverted),
            relations=[_lift_relation(r, base_ring) for r in base_ring.relations]
            + list(fiber_relations),
            order=base_ring.order,
            weights=weights,
        )
        self.fiber_relation_polys = [
            self.total_ring._coerce(r) for r in fiber_relations
        ]
        self.name = name or "tower"
        self.canonical_h1 = canonical_h1  # optional named basis hook
        self._check_structure_map()

    def _check_structure_map(self):
        # base relations must map to zero in S under the name-for-name map
        for rel in self.base_ring.relations:
            lifted = _lift_relation(rel, self.base_ring)
            from .parsing import parse_poly

            if not self.total_ring.normal_form(parse_poly(self.total_ring, lifted)).is_zero():
                raise ValueError("structure map does not respect base relations")

    @property
    def base_vars(self):
        return self.base_ring.names

    def base_dim(self):
        return len(self.base_ring.names)

    def fiber_weight(self, name):
        return self.total_ring.weights[name]


def _lift_relation(rel, base_ring):
    from .poly import format_poly

    return format_poly(rel) if isinstance(rel, Poly) else rel


class FiberAlgebra:
    """S as a free R-module on reduced fiber monomials, with a monic rewrite.

    Elements are dicts {fiber exponent tuple: base-ring Poly}.  The rewrite
    rule replaces the lex-largest fiber monomial of one relation by strictly
    smaller monomials, so reduction terminates and reduced monomials form an
    R-basis.
    """

    def __init__(self, tower):
        self.tower = tower
        self.base = tower.base_ring
        self.fvars = tower.fiber_vars
        self.rules = []
        for rel in tower.fiber_relation_polys:
            self.rules.append(self._rule_from_relation(rel))
        if len(self.rules) > 1:
            raise ValueError("at most one fiber relation is supported")

    def _rule_from_relation(self, rel):
        # split the relation into fiber monomial -> base coefficient
        split = self._split(rel)
        lead = max(split, key=self._lex_key)
        coeff = split[lead]
        if not self._is_base_unit(coeff):
            raise ValueError("fiber relation is not monic over the base")
        inv = self._base_unit_inverse(coeff)
        repl = {}
        for mon, c in split.items():
            if mon == lead:
                continue
            repl[mon] = self.base.normal_form((-c) * inv)
        for mon in repl:
            if self._lex_key(mon) >= self._lex_key(lead):
                raise ValueError("rewrite does not decrease the fiber order")
        return lead, repl

    def _lex_key(self, mon):
        return tuple(mon)

    def _split(self, poly):
        """Total-ring Poly -> {fiber exponents: base Poly}."""
        total = self.tower.total_ring
        out = {}
        for m, c in poly.terms.items():
            fib = []
            base_exp = [0] * len(total.ivars)
            for i, e in enumerate(m):
                nm = total.ivars[i]
                root = nm[:-5] if nm.endswith("__inv") else nm
                if root in self.fvars:
                    fib.append((self.fvars.index(root), e if not nm.endswith("__inv") else -e))
                else:
                    base_exp[i] = e
            fexp = [0] * len(self.fvars)
            for pos, e in fib:
                fexp[pos] += e
            bpoly = self._base_mono(base_exp, c)
            key = tuple(fexp)
            old = out.get(key)
            out[key] = bpoly if old is None else old + bpoly
        return {k: v for k, v in out.items() if v}

    def _base_mono(self, total_exp, coeff):
        base = self.base
        exps = [0] * len(base.names)
        for i, e in enumerate(total_exp):
            if not e:
                continue
            nm = self.tower.total_ring.ivars[i]
            root = nm[:-5] if nm.endswith("__inv") else nm
            pos = base.name_pos[root]
            exps[pos] += -e if nm.endswith("__inv") else e
        return base.monomial(tuple(exps), coeff)

    def _is_base_unit(self, poly):
        if len(poly.terms) != 1:
            return False
        (mon, _), = poly.terms.items()
        # monomials in Laurent variables are units; ordinary variables are not
        for i, e in enumerate(mon):
            nm = self.base.ivars[i]
            root = nm[:-5] if nm.endswith("__inv") else nm
            if e and root not in self.base.inverted:
                return False
        return True

    def _base_unit_inverse(self, poly):
        (mon, c), = poly.terms.items()
        pub = [0] * len(self.base.names)
        for i, e in enumerate(mon):
            nm = self.base.ivars[i]
            if nm.endswith("__inv"):
                pub[self.base.name_pos[nm[:-5]]] -= e
            else:
                pub[self.base.name_pos[nm]] += e
        return self.base.monomial(tuple(-x for x in pub), 1 / c)

    # -- element arithmetic ---------------------------------------------------

    def zero(self):
        return {}

    def reduce(self, elem):
        """Apply the rewrite rules until all fiber monomials are reduced."""
        if not self.rules:
            return {k: v for k, v in elem.items() if v}
        lead, repl = self.rules[0]
        work = dict(elem)
        out = {}
        while work:
            mon = max(work, key=self._lex_key)
            coeff = work.pop(mon)
            if not coeff:
                continue
            if all(a >= b for a, b in zip(mon, lead)):
                rest = tuple(a - b for a, b in zip(mon, lead))
                for rm, rc in repl.items():
                    key = tuple(a + b for a, b in zip(rest, rm))
                    add = self.base.normal_form(coeff * rc)
                    old = work.get(key)
                    tot = add if old is None else old + add
                    if tot:
                        work[key] = tot
                    else:
                        work.pop(key, None)
            else:
                old = out.get(mon)
                tot = coeff if old is None else old + coeff
                if tot:
                    out[mon] = tot
                else:
                    out.pop(mon, None)
        return out

    def is_reduced_monomial(self, mon):
        if not self.rules:
            return True
        lead, _ = self.rules[0]
        return not all(a >= b for a, b in zip(mon, lead))

    def multiply(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                key = tuple(x + y for x, y in zip(m1, m2))
                prod = self.base.normal_form(c1 * c2)
                old = out.get(key)
                tot = prod if old is None else old + prod
                if tot:
                    out[key] = tot
                else:
                    out.pop(key, None)
        return self.reduce(out)

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            old = out.get(m)
            tot = c if old is None else old + c
            if tot:
                out[m] = tot
            else:
                out.pop(m, None)
        return out

    def scale(self, a, base_poly):
        return self.reduce({m: self.base.normal_form(c * base_poly) for m, c in a.items()})

    def fiber_degree(self, mon):
        return sum(
            self.tower.fiber_weight(self.fvars[i]) * e for i, e in enumerate(mon)
        )

    def fiber_partial(self, elem, var_index):
        """d/d(fiber var): acts on fiber monomials, coefficients untouched."""
        out = {}
        for mon, c in elem.items():
            e = mon[var_index]
            if not e:
                continue
            key = tuple(x - (1 if i == var_index else 0) for i, x in enumerate(mon))
            add = c.scale(Fraction(e))
            old = out.get(key)
            tot = add if old is None else old + add
            if tot:
                out[key] = tot
            else:
                out.pop(key, None)
        return out

    def base_partial(self, elem, base_name):
        """d/d(base var): acts on the R-coefficients."""
        out = {}
        for mon, c in elem.items():
            dc = self.base.normal_form(c.public_derivative(base_name))
            if dc:
                out[mon] = dc
        return out

    def reduced_monomials(self, max_fiber_degree):
        """Reduced fiber monomials of weighted fiber degree <= bound."""
        weights = [self.tower.fiber_weight(v) for v in self.fvars]
        out = []

        def rec(i, acc, deg):
            if i == len(self.fvars):
                mon = tuple(acc)
                if self.is_reduced_monomial(mon):
                    out.append(mon)
                return
            e = 0
            while deg + weights[i] * e <= max_fiber_degree:
                rec(i + 1, acc + [e], deg + weights[i] * e)
                e += 1

        rec(0, [], 0)
        out.sort()
        return out


# -- base-coefficient conversion (one-dimensional Laurent bases) --------------


def base_to_lpoly(base_ring, poly):
    """Poly in a one-variable (possibly Laurent) base ring -> LPoly."""
    if len(base_ring.names) != 1:
        raise ValueError("LPoly conversion needs a one-dimensional base")
    out = {}
    for exps, c in poly.public_terms().items():
        out[exps[0]] = out.get(exps[0], FZERO) + c
    return LPoly(out)


def lpoly_to_base(base_ring, lp):
    out = base_ring.const(0)
    for k, c in lp.c.items():
        out = out + base_ring.monomial((k,), c)
    return out


class RelativeDeRham:
    """Relative de Rham complex on a fiber-degree window, over exact R.

    Basis of Omega^p: (reduced fiber monomial, index tuple of fiber
    differentials) with total weighted fiber degree <= the window.  The
    differential is R-linear; the Jacobian relation span is an R-submodule.
    """

    def __init__(self, tower, window):
        self.tower = tower
        self.fa = FiberAlgebra(tower)
        self.window = window
        self.fvars = tower.fiber_vars
        self.weights = [tower.fiber_weight(v) for v in self.fvars]
        self._basis = {}
        self._rel_span = {}

    def basis(self, p):
        if p in self._basis:
            return self._basis[p]
        from itertools import combinations

        out = []
        if 0 <= p <= len(self.fvars):
            for idx in combinations(range(len(self.fvars)), p):
                widx = sum(self.weights[i] for i in idx)
                for mon in self.fa.reduced_monomials(self.window - widx):
                    out.append((mon, tuple(idx)))
        out.sort(key=lambda lb: (lb[1], lb[0]))
        self._basis[p] = out
        return out

    def index(self, p):
        return {lb: i for i, lb in enumerate(self.basis(p))}

    def relation_one_forms(self):
        """d_rel of each fiber relation: {var index: fiber-algebra element}.

        The relation is differentiated before any rewrite (its own rule would
        reduce it to zero); only the derivative's coefficients are reduced.
        """
        out = []
        for rel in self.tower.fiber_relation_polys:
            split = self.fa._split(rel)
            form = {}
            for v in range(len(self.fvars)):
                dv = self.fa.fiber_partial(split, v)
                dv = self.fa.reduce(dv)
                if dv:
                    form[v] = dv
            out.append(form)
        return out

    def relation_span_columns(self, p, with_meta=False):
        """Generators over R of (Jacobian submodule) & (window) in Omega^p.

        Multiples m' * rho ^ dx_sub are enumerated past the window by one
        relation-weight of slack; combinations whose out-of-window terms
        cancel are found as a kernel over R, so the span includes elements
        like (a(t) m_1 + b(t) m_2) rho ^ dx whose constituents leak.  With
        with_meta each returned column carries its expression over the
        (relation index, multiplier, subset) constituents, which downstream
        code needs to convert fiber-exactness into base differentials.
        """
        key = p
        if key not in self._rel_span:
            self._rel_span[key] = self._intersect_relation_span(p)
        cols, combos = self._rel_span[key]
        return (cols, combos) if with_meta else cols

    def _intersect_relation_span(self, p):
        from itertools import combinations

        if p < 1:
            return [], []
        idx_map = self.index(p)
        base_ring = self.tower.base_ring
        forms = self.relation_one_forms()
        slack = max((self._form_weight(f) for f in forms), default=0)
        raw_cols = []   # columns over inside (int) and outside (label) keys
        raw_meta = []
        for gi, form in enumerate(forms):
            rel_w = self._form_weight(form)
            for sub in combinations(range(len(self.fvars)), p - 1):
                wsub = sum(self.weights[i] for i in sub)
                bound = self.window + slack - wsub - rel_w
                for mon in self.fa.reduced_monomials(bound):
                    col = {}
                    mon_elem = {mon: base_ring.const(1)}
                    for v, coeff in form.items():
                        if v in sub:
                            continue
                        sign = (-1) ** sum(1 for t in sub if t < v)
                        idx = tuple(sorted(sub + (v,)))
                        prod = self.fa.multiply(mon_elem, coeff)
                        for fmon, c in prod.items():
                            lb = (fmon, idx)
                            kk = idx_map[lb] if lb in idx_map else ("out", lb)
                            add = c.scale(Fraction(sign))
                            old = col.get(kk)
                            tot = add if old is None else old + add
                            if tot:
                                col[kk] = tot
                            else:
                                col.pop(kk, None)
                    if col:
                        raw_cols.append(col)
                        raw_meta.append((gi, mon, sub))
        if not raw_cols:
            return [], []
        outside_keys = sorted(
            {k for col in raw_cols for k in col if isinstance(k, tuple) and k and k[0] == "out"},
            key=repr,
        )
        if not outside_keys:
            cols = [{k: v for k, v in col.items()} for col in raw_cols]
            combos = [
                [(raw_meta[j], LPoly.const(1))] for j in range(len(raw_cols))
            ]
            return cols, combos
        okey_pos = {k: i for i, k in enumerate(outside_keys)}
        outside_block = [
            [LPoly.zero()] * len(raw_cols) for _ in range(len(outside_keys))
        ]
        for j, col in enumerate(raw_cols):
            for k, c in col.items():
                if isinstance(k, tuple) and k and k[0] == "out":
                    outside_block[okey_pos[k]][j] = base_to_lpoly(base_ring, c)
        combos_ker = kernel_over(outside_block, LaurentDomain, ncols=len(raw_cols))
        cols = []
        combos = []
        for vec in combos_ker:
            col = {}
            used = []
            for j, a in enumerate(vec):
                if a.is_zero():
                    continue
                used.append((raw_meta[j], a))
                mult = lpoly_to_base(base_ring, a)
                for k, c in raw_cols[j].items():
                    if isinstance(k, tuple) and k and k[0] == "out":
                        continue
                    add = base_ring.normal_form(c * mult)
                    old = col.get(k)
                    tot = add if old is None else old + add
                    if tot:
                        col[k] = tot
                    else:
                        col.pop(k, None)
            if col:
                cols.append(col)
                combos.append(used)
        return cols, combos

    def _form_weight(self, form):
        degs = set()
        for v, coeff in form.items():
            for mon in coeff:
                degs.add(self.fa.fiber_degree(mon) + self.weights[v])
        return max(degs) if degs else 0

    def differential_columns(self, p):
        """d: Omega^p -> Omega^{p+1} as columns over R on the window bases."""
        idx_map = self.index(p + 1)
        cols = []
        for (mon, idx) in self.basis(p):
            col = {}
            elem = {mon: self.tower.base_ring.const(1)}
            for v in range(len(self.fvars)):
                if v in idx:
                    continue
                dv = self.fa.fiber_partial(elem, v)
                if not dv:
                    continue
                sign = (-1) ** sum(1 for t in idx if t < v)
                new_idx = tuple(sorted(idx + (v,)))
                for fmon, c in dv.items():
                    lb = (fmon, new_idx)
                    if lb not in idx_map:
                        raise AssertionError("relative differential left the window")
                    i = idx_map[lb]
                    add = c.scale(Fraction(sign))
                    old = col.get(i)
                    tot = add if old is None else old + add
                    if tot:
                        col[i] = tot
                    else:
                        col.pop(i, None)
            cols.append(col)
        return cols

    # -- homology over a one-dimensional base ---------------------------------

    def _require_pid_base(self):
        if len(self.tower.base_ring.names) != 1:
            raise ValueError("module homology needs a one-dimensional base ring")

    def _dense(self, cols, rows):
        out = [[LPoly.zero() for _ in cols] for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, c in col.items():
                out[i][j] = base_to_lpoly(self.tower.base_ring, c)
        return out

    def cohomology_module(self, p):
        """H^p as an R-module: (free rank, torsion, basis columns, context).

        Z = preimage of the relation span under d_p; H = Z / (im d_{p-1} +
        relation span at p); everything is exact over Q[t^{pm 1}].
        """
        self._require_pid_base()
        np_ = len(self.basis(p))
        np1 = len(self.basis(p + 1))
        d_cols = self._dense(self.differential_columns(p), np1) if np_ else []
        rel_next = self._dense(self.relation_span_columns(p + 1), np1)
        # kernel of F_p (+) R^rels -> F_{p+1}
        width = np_ + (len(rel_next[0]) if rel_next and rel_next[0] else 0)
        block = [[LPoly.zero()] * (np_ + _ncols(rel_next)) for _ in range(np1)]
        for i in range(np1):
            for j in range(np_):
                block[i][j] = d_cols[i][j] if d_cols else LPoly.zero()
            for j in range(_ncols(rel_next)):
                block[i][np_ + j] = rel_next[i][j]
        if np1:
            ker = kernel_over(block, LaurentDomain, ncols=np_ + _ncols(rel_next))
        else:
            ker = [
                [LaurentDomain.one if i == j else LaurentDomain.zero
                 for i in range(np_)]
                for j in range(np_)
            ]
        zgens = []
        for v in ker:
            z = v[:np_]
            if any(not c.is_zero() for c in z):
                zgens.append(z)
        # subgroup: images of d_{p-1} plus the relation span at p
        wgens = []
        if p >= 1:
            prev = self._dense(self.differential_columns(p - 1), np_)
            for j in range(_ncols(prev)):
                col = [prev[i][j] for i in range(np_)]
                if any(not c.is_zero() for c in col):
                    wgens.append(col)
        rel_here = self._dense(self.relation_span_columns(p), np_)
        for j in range(_ncols(rel_here)):
            col = [rel_here[i][j] for i in range(np_)]
            if any(not c.is_zero() for c in col):
                wgens.append(col)
        return _module_quotient(zgens, wgens, np_)


def _ncols(dense):
    return len(dense[0]) if dense and dense[0] is not None and len(dense) else 0


class ModuleQuotient:
    """Z / W for submodules W <= Z <= R^n over the Laurent PID."""

    def __init__(self, zgens, relations_in_z, n):
        self.n = n
        self.zgens = zgens  # columns, a free basis of Z
        self.rel = relations_in_z  # columns in Z-coordinates
        if relations_in_z and zgens:
            snf = smith_normal_form(
                [[relations_in_z[j][i] for j in range(len(relations_in_z))]
                 for i in range(len(zgens))],
                LaurentDomain,
            )
            self.snf = snf
            diag = list(snf.diag) + [LPoly.zero()] * (len(zgens) - snf.rank)
        else:
            self.snf = None
            diag = [LPoly.zero()] * len(zgens)
        self.invariants = diag
        self.free_positions = [i for i, d in enumerate(diag) if d.is_zero()]
        self.torsion = [d for d in diag if not d.is_zero() and not d.is_unit()]

    @property
    def free_rank(self):
        return len(self.free_positions)

    def is_free(self):
        return not self.torsion

    def basis_columns(self):
        """Representative columns in R^n for the free part's basis classes."""
        out = []
        for i in self.free_positions:
            if self.snf is None:
                coeffs = [LaurentDomain.one if k == i else LaurentDomain.zero
                          for k in range(len(self.zgens))]
            else:
                target = [LaurentDomain.one if k == i else LaurentDomain.zero
                          for k in range(len(self.zgens))]
                coeffs = solve_over(self.snf.U, target, LaurentDomain)
            col = [LPoly.zero()] * self.n
            for k, a in enumerate(coeffs):
                if a.is_zero():
                    continue
                for r in range(self.n):
                    col[r] = col[r] + a * self.zgens[k][r]
            out.append(col)
        return out

    def class_coordinates(self, column):
        """Free-part coordinates of a vector of Z; None if not in Z."""
        if not self.zgens:
            return None if any(not c.is_zero() for c in column) else {}
        mat = [[self.zgens[j][i] for j in range(len(self.zgens))] for i in range(self.n)]
        x = solve_over(mat, column, LaurentDomain)
        if x is None:
            return None
        if self.snf is None:
            y = x
        else:
            y = _matvec_l(self.snf.U, x)
        coords = {}
        for pos, i in enumerate(self.free_positions):
            if not y[i].is_zero():
                coords[pos] = y[i]
        # torsion/unit positions must be compatible (killed or divisible)
        for i, dinv in enumerate(self.invariants):
            if i in self.free_positions:
                continue
            if dinv.is_unit():
                continue
            q, r = y[i].divmod(dinv)
            if not r.is_zero():
                return None
        return coords


def _matvec_l(mat, vec):
    out = []
    for row in mat:
        s = LPoly.zero()
        for a, b in zip(row, vec):
            if not a.is_zero() and not b.is_zero():
                s = s + a * b
        out.append(s)
    return out


def _module_quotient(zgens, wgens, n):
    """Present Z/W given generating columns; Z-generators from a kernel are a
    basis (Smith V-columns are unimodular), relations are solved lifts."""
    rel = []
    for w in wgens:
        if not zgens:
            continue
        mat = [[zgens[j][i] for j in range(len(zgens))] for i in range(n)]
        x = solve_over(mat, w, LaurentDomain)
        if x is None:
            raise AssertionError("subgroup generator not inside the cycles")
        rel.append(x)
    return ModuleQuotient(zgens, rel, n)
