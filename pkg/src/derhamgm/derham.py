"""Kaehler differentials and de Rham complexes of presented rings.

A form of degree p over a ring S (relative to an optional base subset of the
variables) is a sum of terms f * dv_{i_1} ^ ... ^ dv_{i_p} with strictly
increasing index tuples; coefficients live in S and are kept in normal form.
The complex is sliced by total weighted degree d, where a differential dv
carries the weight of v; windows bound the coefficient monomial's weighted
degree by D (and the exponent of every inverted variable by W), which is what
makes every slice a finite-dimensional exact linear-algebra problem.
"""

from fractions import Fraction

from .complexes import CochainComplex, FilteredComplex
from .poly import Poly, Ring
from .qlinalg import QMatrix, Quotient

FZERO = Fraction(0)
FONE = Fraction(1)


class DifferentialForm:
    """Exterior form with polynomial coefficients, terms keyed by index tuple."""

    __slots__ = ("ring", "base", "degree", "terms")

    def __init__(self, ring, degree, terms=None, base=()):
        self.ring = ring
        self.base = tuple(base)
        self.degree = degree
        self.terms = {}
        if terms:
            for idx, poly in terms.items():
                p = ring.normal_form(poly)
                if p:
                    self.terms[tuple(idx)] = p

    def form_variables(self):
        return [n for n in self.ring.names if n not in self.base]

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for idx, p in other.terms.items():
            s = out.get(idx)
            s = p if s is None else s + p
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return DifferentialForm(self.ring, self.degree, out, self.base)

    def __neg__(self):
        return DifferentialForm(
            self.ring, self.degree, {i: -p for i, p in self.terms.items()}, self.base
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DifferentialForm(
            self.ring, self.degree, {i: p.scale(c) for i, p in self.terms.items()},
            self.base,
        )

    def multiply(self, poly):
        return DifferentialForm(
            self.ring, self.degree, {i: p * poly for i, p in self.terms.items()},
            self.base,
        )

    def wedge(self, other):
        out = {}
        for t1, p1 in self.terms.items():
            for t2, p2 in other.terms.items():
                merged = _merge_indices(t1, t2)
                if merged is None:
                    continue
                idx, sign = merged
                coeff = p1 * p2
                if sign < 0:
                    coeff = -coeff
                old = out.get(idx)
                coeff = coeff if old is None else old + coeff
                if coeff:
                    out[idx] = coeff
                else:
                    out.pop(idx, None)
        return DifferentialForm(self.ring, self.degree + other.degree, out, self.base)

    def d(self):
        """Exterior derivative; base variables' differentials are zero."""
        ring = self.ring
        form_vars = [ring.name_pos[n] for n in self.form_variables()]
        out = {}
        for idx, poly in self.terms.items():
            for v in form_vars:
                if v in idx:
                    continue
                coeff = poly.public_derivative(ring.names[v])
                if not coeff:
                    continue
                sign = (-1) ** sum(1 for t in idx if t < v)
                new_idx = tuple(sorted(idx + (v,)))
                add = coeff if sign > 0 else -coeff
                old = out.get(new_idx)
                add = add if old is None else old + add
                if add:
                    out[new_idx] = add
                else:
                    out.pop(new_idx, None)
        return DifferentialForm(ring, self.degree + 1, out, self.base)

    def weight(self):
        """Total weighted degree when homogeneous, else None."""
        degs = set()
        for idx, poly in self.terms.items():
            widx = sum(self.ring.weights[self.ring.names[i]] for i in idx)
            for m in poly.terms:
                degs.add(self.ring.mon_weight(m) + widx)
        if len(degs) == 1:
            return degs.pop()
        return None if degs else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        from .poly import format_poly

        for idx in sorted(self.terms):
            dv = "^".join("d" + self.ring.names[i] for i in idx)
            coeff = format_poly(self.terms[idx])
            if len(self.terms[idx].terms) > 1:
                coeff = f"({coeff})"
            bits.append(f"{coeff}*{dv}" if dv else coeff)
        return " + ".join(bits)


def _merge_indices(t1, t2):
    if set(t1) & set(t2):
        return None
    merged = t1 + t2
    # count inversions of the concatenation against sorted order
    sign = 1
    items = list(merged)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return tuple(sorted(items)), sign


def kaehler_presentation(ring, base=()):
    """Presentation of the (relative) Kaehler differentials.

    Generators dv for each non-base variable; one relation row per ring
    relation g, namely its relative differential sum (dg/dv) dv.  For
    inverted variables the rule d(x^{-1}) = -x^{-2} dx is built into the
    derivative, so no extra generators appear.
    """
    form_vars = [n for n in ring.names if n not in base]
    rows = []
    for g in ring.relations:
        row = {}
        for n in form_vars:
            c = ring.normal_form(g.public_derivative(n))
            if c:
                row[n] = c
        rows.append(row)
    return {"generators": [f"d{n}" for n in form_vars],
            "variables": form_vars,
            "relation_rows": rows}


def relation_one_forms(ring, base=()):
    """The forms d(g) for the ring relations, with base differentials killed."""
    out = []
    form_vars = [n for n in ring.names if n not in base]
    for g in ring.relations:
        terms = {}
        for n in form_vars:
            c = g.public_derivative(n)
            if c:
                terms[(ring.name_pos[n],)] = c
        form = DifferentialForm(ring, 1, terms, base)
        out.append(form)
    return out


class DeRhamComplex:
    """Windowed (relative) de Rham complex with exact slice linear algebra.

    Slices are indexed by (form degree p, total weighted degree d); ambient
    labels are pairs (standard monomial, index tuple).  Each slice is the
    quotient of its label span by the wedge multiples of the relation
    one-forms; the exterior derivative is assembled per slice and preserves
    d because differentials carry their variable's weight.
    """

    def __init__(self, ring, base=(), window=8, laurent_bound=None):
        self.ring = ring
        self.base = tuple(base)
        for b in self.base:
            if b not in ring.names:
                raise ValueError(f"base variable {b!r} not in the ring")
        self.window = window
        if laurent_bound is None:
            laurent_bound = window + 2
        self.laurent_bound = laurent_bound if ring.inverted else None
        self.form_vars = [n for n in ring.names if n not in self.base]
        self.form_idx = [ring.name_pos[n] for n in self.form_vars]
        self._rel_forms = relation_one_forms(ring, self.base)
        self._slices = {}
        self._diffs = {}
        self.edge_flags = set()
        self.incomplete = set()

    # -- slice construction -------------------------------------------------

    def index_sets(self, p):
        from itertools import combinations

        if p < 0:
            return []
        return [tuple(sorted(c)) for c in combinations(sorted(self.form_idx), p)]

    def _tuple_weight(self, idx):
        return sum(self.ring.weights[self.ring.names[i]] for i in idx)

    def _caps_for(self, idx):
        """Inverse-exponent caps for labels with index tuple idx.

        The cap W is shifted up by one for a variable whose differential is
        already in idx: the quantity exp(v_inv) - #(dv in idx) is preserved
        by the exterior derivative, so this windowing is d-stable and the
        assembled differentials satisfy d^2 = 0 exactly.
        """
        if self.laurent_bound is None:
            return None
        caps = {}
        for n in self.ring.inverted:
            caps[n] = self.laurent_bound + (1 if self.ring.name_pos[n] in idx else 0)
        return caps

    def labels(self, p, d):
        """Ambient slice labels (mon, idx) of exact total weight d.

        A slice holds every label of its weight (the degree window only
        selects which weights are reported), so the assembled differential
        never leaves a stored slice and d^2 = 0 holds exactly.  Only the
        inverse-variable caps truncate, and those are d-stable.
        """
        out = []
        ring = self.ring
        for idx in self.index_sets(p):
            mdeg = d - self._tuple_weight(idx)
            caps = self._caps_for(idx)
            for mon in ring.standard_monomials(mdeg, caps):
                out.append((mon, idx))
            if caps is not None and self._laurent_cap_hit(mdeg, caps):
                self.incomplete.add((p, d))
        out.sort(key=lambda lb: (lb[1], ring.order_key(lb[0])))
        return out

    def _laurent_cap_hit(self, mdeg, caps):
        for mon in self.ring.standard_monomials(mdeg, caps):
            for i, name in enumerate(self.ring.ivars):
                if name.endswith("__inv") and mon[i] >= caps[name[:-5]]:
                    return True
        return False

    def slice(self, p, d):
        key = (p, d)
        if key in self._slices:
            return self._slices[key]
        labels = self.labels(p, d)
        pos = {lb: i for i, lb in enumerate(labels)}
        rel_vectors = []
        if labels and p >= 1 and self._rel_forms:
            for rel in self._rel_forms:
                rel_weight = rel.weight()
                if rel_weight is None:
                    raise ValueError(
                        "relations must be weight-homogeneous for graded slicing; "
                        "choose variable weights that homogenize them"
                    )
                for idx in self.index_sets(p - 1):
                    mdeg = d - rel_weight - self._tuple_weight(idx)
                    for mon in self.ring.standard_monomials(mdeg, self._caps_for(idx)):
                        vec = self._relation_vector(rel, mon, idx, pos, key)
                        if vec:
                            rel_vectors.append(vec)
        quo = Quotient(len(labels), rel_vectors)
        space = _Slice(p, d, labels, pos, quo)
        self._slices[key] = space
        return space

    def _relation_vector(self, rel, mon, idx, pos, key):
        ring = self.ring
        base_form = DifferentialForm(
            ring, len(idx), {idx: Poly(ring, {mon: FONE})}, self.base
        )
        prod = rel.wedge(base_form)
        vec = {}
        for t, poly in prod.terms.items():
            for m, c in poly.terms.items():
                lb = (m, t)
                if lb not in pos:
                    self.edge_flags.add(key)
                    return None
                i = pos[lb]
                s = vec.get(i, FZERO) + c
                if s:
                    vec[i] = s
                else:
                    vec.pop(i, None)
        return vec

    def dim(self, p, d):
        return self.slice(p, d).quotient.dim

    def differential(self, p, d):
        key = (p, d)
        if key in self._diffs:
            return self._diffs[key]
        src = self.slice(p, d)
        tgt = self.slice(p + 1, d)
        mat = QMatrix(tgt.quotient.dim, src.quotient.dim)
        for j in range(src.quotient.dim):
            lb = src.labels[src.quotient.basis_indices[j]]
            vec = self._d_of_label(lb, tgt, key)
            for i, c in tgt.quotient.coords(vec).items():
                mat.set(i, j, c)
        self._diffs[key] = mat
        return mat

    def _d_of_label(self, lb, tgt, key):
        ring = self.ring
        mon, idx = lb
        form = DifferentialForm(ring, len(idx), {idx: Poly(ring, {mon: FONE})}, self.base)
        df = form.d()
        vec = {}
        for t, poly in df.terms.items():
            for m, c in poly.terms.items():
                label = (m, t)
                if label not in tgt.pos:
                    self.edge_flags.add((tgt.p, tgt.d))
                    continue
                i = tgt.pos[label]
                s = vec.get(i, FZERO) + c
                if s:
                    vec[i] = s
                else:
                    vec.pop(i, None)
        return vec

    # -- assembled views ------------------------------------------------------

    def degree_range(self, p):
        """Internal degrees d where the (p, d) slice can be nonempty."""
        lo = None
        hi = None
        for idx in self.index_sets(p):
            w = self._tuple_weight(idx)
            lo_c = w - (self.window if self.ring.inverted else 0)
            hi_c = w + self.window
            lo = lo_c if lo is None else min(lo, lo_c)
            hi = hi_c if hi is None else max(hi, hi_c)
        if lo is None:
            return range(0)
        return range(lo, hi + 1)

    def as_cochain(self, degrees=None, pmin=0, pmax=None):
        if pmax is None:
            pmax = len(self.form_vars)
        if degrees is None:
            ds = set()
            for p in range(pmin, pmax + 1):
                ds.update(self.degree_range(p))
            degrees = sorted(ds)
        out = CochainComplex(meta={"ring": repr(self.ring), "base": self.base})
        for p in range(pmin, pmax + 1):
            for d in degrees:
                s = self.slice(p, d)
                if s.quotient.dim:
                    out.set_slice(p, d, [f"w{p}[{d}]#{k}" for k in range(s.quotient.dim)])
        for p in range(pmin, pmax + 1):
            for d in degrees:
                if out.dim(p, d) and out.dim(p + 1, d):
                    out.set_differential(p, d, self.differential(p, d))
                elif out.dim(p, d):
                    out.set_differential(p, d, QMatrix(0, out.dim(p, d)))
        return out

    def form_to_vector(self, form, p, d):
        """Quotient coordinates of a form inside slice (p, d)."""
        s = self.slice(p, d)
        vec = {}
        nf = DifferentialForm(self.ring, form.degree, form.terms, self.base)
        for t, poly in nf.terms.items():
            for m, c in poly.terms.items():
                lb = (m, t)
                if lb not in s.pos:
                    raise ValueError(f"form leaves the window at {lb}")
                vec[s.pos[lb]] = c
        return s.quotient.coords(vec)

    def vector_to_form(self, coords, p, d):
        s = self.slice(p, d)
        terms = {}
        lifted = s.quotient.lift(coords)
        for i, c in lifted.items():
            mon, idx = s.labels[i]
            poly = Poly(self.ring, {mon: c})
            old = terms.get(idx)
            terms[idx] = poly if old is None else old + poly
        return DifferentialForm(self.ring, p, terms, self.base)

    # -- cohomology ------------------------------------------------------------

    def cohomology(self, p, degrees=None):
        """Per-degree cohomology over complete slices: {d: (dim, reps)}."""
        if degrees is None:
            degrees = self.degree_range(p)
        out = {}
        for d in degrees:
            if not self._trustworthy(p, d):
                continue
            dim_here = self.dim(p, d)
            if dim_here == 0 and self.dim(p - 1, d) == 0:
                continue
            mat_out = self.differential(p, d)
            mat_in = self.differential(p - 1, d) if p > 0 else QMatrix(dim_here, 0)
            from .qlinalg import Echelon, kernel_basis

            cocycles = kernel_basis(mat_out)
            sub = Echelon()
            for col in mat_in.columns():
                sub.add(col)
            reps = []
            ech = Echelon()
            for z in cocycles:
                r, _ = sub.reduce(z)
                if r and ech.add(dict(r)) is not None:
                    reps.append(z)
            if reps:
                out[d] = (len(reps), reps)
        return out

    def _trustworthy(self, p, d):
        for q in (p - 1, p, p + 1):
            if q < 0:
                continue
            self.slice(q, d)
            if (q, d) in self.incomplete or (q, d) in self.edge_flags:
                return False
        return True


class _Slice:
    __slots__ = ("p", "d", "labels", "pos", "quotient")

    def __init__(self, p, d, labels, pos, quotient):
        self.p = p
        self.d = d
        self.labels = labels
        self.pos = pos
        self.quotient = quotient


def derham_complex(ring, base=(), window=8, laurent_bound=None):
    return DeRhamComplex(ring, base, window, laurent_bound)


def form_class_is_zero(dr, form):
    """Whether a form vanishes in the quotient by the relation one-forms.

    Splits the form into weight-homogeneous components and reduces each in
    its slice; components escaping the window raise.
    """
    by_weight = {}
    for idx, poly in form.terms.items():
        widx = sum(dr.ring.weights[dr.ring.names[i]] for i in idx)
        for m, c in poly.terms.items():
            d = dr.ring.mon_weight(m) + widx
            comp = by_weight.setdefault(d, {})
            old = comp.get(idx)
            extra = Poly(dr.ring, {m: c})
            comp[idx] = extra if old is None else old + extra
    for d, terms in by_weight.items():
        comp = DifferentialForm(dr.ring, form.degree, terms, dr.base)
        if comp.is_zero():
            continue
        coords = dr.form_to_vector(comp, form.degree, d)
        if any(coords.values()):
            return False
    return True


def derham_cohomology(ring, p, base=(), window=8, laurent_bound=None):
    """(table, total, representatives, stabilized) for H^p with the two-window
    stabilization policy: dims must agree at windows D and D+1 and the smaller
    window's representatives must still be cohomology classes spanning the
    larger window's answer."""
    small = DeRhamComplex(ring, base, window, laurent_bound)
    big = DeRhamComplex(
        ring, base, window + 1, None if laurent_bound is None else laurent_bound + 1
    )
    table_small = small.cohomology(p)
    table_big = big.cohomology(p)
    common = set(table_small) | set(table_big)
    common = {d for d in common if d in small.degree_range(p) and small._trustworthy(p, d)}
    stabilized = True
    for d in sorted(common):
        dim_s = table_small.get(d, (0, []))[0]
        dim_b = table_big.get(d, (0, []))[0]
        if dim_s != dim_b:
            stabilized = False
            continue
        # representatives must map to each other across windows
        if dim_s:
            reps_small = table_small[d][1]
            sb = big.slice(p, d)
            ss = small.slice(p, d)
            from .qlinalg import Echelon

            ech = Echelon()
            for z in table_big[d][1]:
                ech.add(dict(z))
            img = big.differential(p - 1, d) if p > 0 else None
            if img is not None:
                for col in img.columns():
                    ech.add(col)
            for z in reps_small:
                form = small.vector_to_form(z, p, d)
                try:
                    coords = big.form_to_vector(form, p, d)
                except ValueError:
                    stabilized = False
                    break
                if not ech.contains(coords):
                    stabilized = False
                    break
    table = {d: table_small[d][0] for d in sorted(table_small)}
    reps = {d: table_small[d][1] for d in sorted(table_small)}
    total = sum(table.values())
    return {"p": p, "dims_by_degree": table, "total": total,
            "stabilized": stabilized, "complex": small, "reps": reps}


def hodge_filtration(dr, degrees=None, pmax=None):
    """The stupid filtration F^n = forms of degree >= n, as a FilteredComplex."""
    if pmax is None:
        pmax = len(dr.form_vars)
    amb = dr.as_cochain(degrees, 0, pmax)
    levels = {}
    for n in range(1, pmax + 1):
        per = {}
        for (p, d) in amb.support():
            if p >= n:
                dim = amb.dim(p, d)
                per[(p, d)] = [{i: FONE} for i in range(dim)]
        levels[n] = per
    return FilteredComplex(amb, levels, pmax)


def collapse_check(tower_ring, base, window=8, laurent_bound=None):
    """Slicewise comparison of the base-form quotient with the relative complex.

    Quotients the absolute complex by the two-sided ideal generated by the
    base differentials and compares dimensions and induced differentials with
    the directly built relative complex; equality per slice is the verdict.
    """
    absolute = DeRhamComplex(tower_ring, (), window, laurent_bound)
    relative = DeRhamComplex(tower_ring, base, window, laurent_bound)
    base_idx = {tower_ring.name_pos[b] for b in base}
    nfib = len(relative.form_vars)
    report = []
    all_ok = True
    for p in range(0, nfib + 1):
        for d in relative.degree_range(p):
            rel_slice = relative.slice(p, d)
            abs_slice = absolute.slice(p, d)
            # quotient of the absolute slice by labels touching the base
            extra = []
            for lb, i in abs_slice.pos.items():
                if set(lb[1]) & base_idx:
                    extra.append({i: FONE})
            killed = list(abs_slice.quotient.sub.basis()) + extra
            quo = Quotient(len(abs_slice.labels), killed)
            dims_equal = quo.dim == rel_slice.quotient.dim
            diff_equal = True
            if dims_equal and quo.dim:
                # compare induced differentials through the label bijection
                rel_mat = relative.differential(p, d)
                tgt_rel = relative.slice(p + 1, d)
                abs_tgt = absolute.slice(p + 1, d)
                extra_t = []
                for lb, i in abs_tgt.pos.items():
                    if set(lb[1]) & base_idx:
                        extra_t.append({i: FONE})
                killed_t = list(abs_tgt.quotient.sub.basis()) + extra_t
                quo_t = Quotient(len(abs_tgt.labels), killed_t)
                for j in range(quo.dim):
                    amb_label = abs_slice.labels[quo.basis_indices[j]]
                    vec = absolute._d_of_label(amb_label, abs_tgt, (p, d))
                    got = quo_t.coords(vec)
                    # same label's image in the relative complex
                    if amb_label not in rel_slice.pos:
                        diff_equal = False
                        break
                    rel_coords = rel_slice.quotient.coords(
                        {rel_slice.pos[amb_label]: FONE}
                    )
                    want = {}
                    for jj, cc in rel_coords.items():
                        for ii in range(rel_mat.rows):
                            v = rel_mat.get(ii, jj)
                            if v:
                                want[ii] = want.get(ii, FZERO) + cc * v
                    want = {k: v for k, v in want.items() if v}
                    # translate the relative answer into quotient coordinates
                    tgt_form = relative.vector_to_form(want, p + 1, d)
                    want_q = {}
                    for t, poly in tgt_form.terms.items():
                        for m, c in poly.terms.items():
                            lb2 = (m, t)
                            if lb2 not in abs_tgt.pos:
                                diff_equal = False
                                break
                            idx2 = abs_tgt.pos[lb2]
                            want_q[idx2] = want_q.get(idx2, FZERO) + c
                        if not diff_equal:
                            break
                    if not diff_equal:
                        break
                    want_coords = quo_t.coords({k: v for k, v in want_q.items() if v})
                    if want_coords != got:
                        diff_equal = False
                        break
            ok = dims_equal and diff_equal
            all_ok = all_ok and ok
            if rel_slice.quotient.dim or quo.dim:
                report.append(
                    {"p": p, "d": d, "relative_dim": rel_slice.quotient.dim,
                     "quotient_dim": quo.dim, "equal": ok}
                )
    return {"slices": report, "all_equal": all_ok}


def completed_derham(variables, relations, ideal_gens, precision, weights=None,
                     order="grevlex"):
    """The I-adically completed de Rham complex at finite precision.

    Builds Omega^* mod I^N and mod I^{N+1}, checks that reduction commutes
    with the differential, and reports the stable cohomology dims
    dim im(H^p(mod I^{N+1}) -> H^p(mod I^N)) together with both raw tables.
    """
    def truncated_ring(n):
        ideal_ring = Ring(variables, relations=list(relations), weights=weights,
                          order=order)
        gens = [g if isinstance(g, str) else g for g in ideal_gens]
        powers = _ideal_power(ideal_ring, gens, n)
        rels = list(relations) + powers
        gen_deg = max(
            (parse_deg(ideal_ring, g) for g in gens), default=1
        )
        return Ring(variables, relations=rels, weights=weights, order=order), gen_deg

    from .parsing import parse_poly

    def parse_deg(r, g):
        p = parse_poly(r, g)
        w = p.weighted_degree()
        return w if w is not None else 1

    ring_n, gdeg = truncated_ring(precision)
    ring_n1, _ = truncated_ring(precision + 1)
    w_n = precision * max(gdeg, 1) * max(ring_n.weights.values()) + 2
    w_n1 = (precision + 1) * max(gdeg, 1) * max(ring_n1.weights.values()) + 2
    dr_n = DeRhamComplex(ring_n, (), window=w_n)
    dr_n1 = DeRhamComplex(ring_n1, (), window=w_n1)
    nvars = len(ring_n.names)
    stable = {}
    raw_n = {}
    raw_n1 = {}
    for p in range(0, nvars + 1):
        coh_n = dr_n.cohomology(p, degrees=_full_degrees(dr_n, p))
        coh_n1 = dr_n1.cohomology(p, degrees=_full_degrees(dr_n1, p))
        raw_n[p] = sum(v[0] for v in coh_n.values())
        raw_n1[p] = sum(v[0] for v in coh_n1.values())
        # image of the comparison map: push the (N+1)-reps down mod I^N
        from .qlinalg import Echelon

        count = 0
        for d, (dim, reps) in coh_n1.items():
            mat_out = dr_n.differential(p, d)
            mat_in = dr_n.differential(p - 1, d) if p > 0 else None
            sub = Echelon()
            if mat_in is not None:
                for col in mat_in.columns():
                    sub.add(col)
            ech = Echelon()
            for z in reps:
                form = dr_n1.vector_to_form(z, p, d)
                reduced = DifferentialForm(ring_n, p,
                                           {t: _transport(poly, ring_n)
                                            for t, poly in form.terms.items()})
                try:
                    coords = dr_n.form_to_vector(reduced, p, d)
                except ValueError:
                    continue
                r, _ = sub.reduce(coords)
                if r and ech.add(dict(r)) is not None:
                    count += 1
        stable[p] = count
    return {"precision": precision, "stable_dims": stable, "raw_dims": raw_n,
            "raw_dims_next": raw_n1}


def _transport(poly, ring):
    out = Poly(ring)
    for m, c in poly.terms.items():
        out = out + Poly(ring, {m: c})
    return ring.normal_form(out)


def _ideal_power(ring, gens_txt, n):
    from .parsing import parse_poly
    from .poly import format_poly

    gens = [parse_poly(ring, g) for g in gens_txt]
    if not gens:
        return []
    power = [ring.const(1)]
    for _ in range(n):
        power = [p * g for p in power for g in gens]
        # dedupe
        seen = {}
        for p in power:
            seen[tuple(sorted(p.terms.items()))] = p
        power = list(seen.values())
    return [format_poly(p) for p in power]


def _full_degrees(dr, p):
    return dr.degree_range(p)
