"""Cochain complexes with finite-dimensional graded slices, decreasing
filtrations, bifiltrations, and the spectral-sequence engine over Q.

A complex stores one finite-dimensional slice per (cohomological degree p,
internal degree d) and a sparse matrix per slice for the differential, which
always preserves d.  A filtration stores spanning vectors of each F^n inside
each slice; subcomplex verification is then a matrix identity, and spectral
sequence pages are literal Z_r / B_r subquotients.
"""

from fractions import Fraction

from .qlinalg import Echelon, QMatrix, kernel_basis, vec_axpy

FZERO = Fraction(0)
FONE = Fraction(1)


class GradedSlice:
    __slots__ = ("p", "d", "labels")

    def __init__(self, p, d, labels):
        self.p = p
        self.d = d
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate slice labels")

    @property
    def dim(self):
        return len(self.labels)

    def __repr__(self):
        return f"GradedSlice(p={self.p}, d={self.d}, dim={self.dim})"


class ComplexError(ValueError):
    pass


class CochainComplex:
    """Slices keyed by (p, d) plus degree-preserving differentials."""

    def __init__(self, slices=None, differentials=None, meta=None):
        self.slices = dict(slices or {})
        self.differentials = dict(differentials or {})
        self.meta = dict(meta or {})

    def set_slice(self, p, d, labels):
        self.slices[(p, d)] = GradedSlice(p, d, labels)

    def set_differential(self, p, d, matrix):
        self.differentials[(p, d)] = matrix

    def dim(self, p, d):
        s = self.slices.get((p, d))
        return s.dim if s else 0

    def diff(self, p, d):
        m = self.differentials.get((p, d))
        if m is not None:
            return m
        return QMatrix(self.dim(p + 1, d), self.dim(p, d))

    def support(self):
        return sorted(self.slices)

    def internal_degrees(self):
        return sorted({d for (_, d) in self.slices})

    def cohomological_range(self):
        ps = [p for (p, _) in self.slices]
        return (min(ps), max(ps)) if ps else (0, -1)

    def verify(self):
        """d after d must vanish on every stored slice; returns violations."""
        bad = []
        for (p, d) in self.support():
            m1 = self.diff(p, d)
            m2 = self.diff(p + 1, d)
            if m2.cols != m1.rows:
                if m1.rows and (p + 1, d) in self.slices:
                    bad.append(((p, d), "shape mismatch"))
                continue
            comp = m2.matmul(m1)
            if not comp.is_zero():
                bad.append(((p, d), "d o d != 0"))
        return bad

    def require_valid(self):
        bad = self.verify()
        if bad:
            raise ComplexError(f"complex fails d^2 = 0 first at {bad[0][0]}")

    def cohomology_basis(self, p, d):
        """(dimension, list of representative vectors) of H^p in degree d."""
        n = self.dim(p, d)
        if n == 0:
            return 0, []
        cocycles = kernel_basis(self.diff(p, d))
        prev = self.diff(p - 1, d)
        sub = Echelon()
        for col in prev.columns():
            sub.add(col)
        reps = []
        ech = Echelon()
        for z in cocycles:
            r, _ = sub.reduce(z)
            if r and ech.add(dict(r)) is not None:
                reps.append(z)
        return len(reps), reps

    def total_cohomology_dims(self, d):
        out = {}
        pmin, pmax = self.cohomological_range()
        for p in range(pmin, pmax + 1):
            dim, _ = self.cohomology_basis(p, d)
            if dim:
                out[p] = dim
        return out

    def to_json_dict(self):
        slices = [
            {"p": p, "d": d, "labels": [str(l) for l in s.labels]}
            for (p, d), s in sorted(self.slices.items())
        ]
        diffs = []
        for (p, d), m in sorted(self.differentials.items()):
            entries = [
                [i, j, str(v)] for (i, j), v in sorted(m.entries.items())
            ]
            diffs.append({"p": p, "d": d, "rows": m.rows, "cols": m.cols, "entries": entries})
        return {"kind": "cochain_complex", "slices": slices, "differentials": diffs}


def complex_from_json_dict(data):
    if data.get("kind") != "cochain_complex":
        raise ValueError("not a cochain complex document")
    out = CochainComplex()
    for s in data["slices"]:
        out.set_slice(s["p"], s["d"], s["labels"])
    for m in data["differentials"]:
        mat = QMatrix(m["rows"], m["cols"])
        for i, j, v in m["entries"]:
            mat.set(i, j, Fraction(v))
        out.set_differential(m["p"], m["d"], mat)
    return out


class SubQuotient:
    """span(top) / span(sub) with tracked representative coordinates."""

    def __init__(self, sub_vectors, top_vectors):
        self.sub = Echelon()
        for v in sub_vectors:
            self.sub.add(dict(v))
        self.reps = []
        self._ech = Echelon()
        for v in top_vectors:
            r, _ = self.sub.reduce(v)
            if r and self._ech.add(dict(r), tag=len(self.reps)) is not None:
                self.reps.append(dict(v))

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, vec):
        r, _ = self.sub.reduce(vec)
        residue, combo = self._ech.reduce(r)
        if residue:
            raise ValueError("vector not inside the subquotient's span")
        return combo


class FilteredComplex:
    """Decreasing filtration by stored spanning vectors per slice.

    levels[n][(p, d)] is a list of vectors spanning F^n inside the ambient
    slice; F^0 is the whole slice and F^n = 0 for n > top.
    """

    def __init__(self, ambient, levels, top):
        self.ambient = ambient
        self.levels = {int(n): dict(v) for n, v in levels.items()}
        self.top = top
        self._ech_cache = {}

    def span_vectors(self, n, p, d):
        if n <= 0:
            dim = self.ambient.dim(p, d)
            return [{i: FONE} for i in range(dim)]
        if n > self.top:
            return []
        return [dict(v) for v in self.levels.get(n, {}).get((p, d), [])]

    def echelon(self, n, p, d):
        key = (n, p, d)
        if key not in self._ech_cache:
            ech = Echelon()
            for v in self.span_vectors(n, p, d):
                ech.add(v)
            self._ech_cache[key] = ech
        return self._ech_cache[key]

    def dim(self, n, p, d):
        return self.echelon(n, p, d).dim

    def verify(self):
        """Nesting, exhaustiveness, and differential stability of every F^n."""
        bad = []
        for (p, d) in self.ambient.support():
            mat = self.ambient.diff(p, d)
            for n in range(0, self.top + 2):
                ech = self.echelon(n, p, d)
                larger = self.echelon(max(n - 1, 0), p, d)
                for v in ech.basis():
                    if not larger.contains(v):
                        bad.append((n, p, d, "F^n not inside F^{n-1}"))
                        break
                target = self.echelon(n, p + 1, d)
                for v in ech.basis():
                    img = mat.apply(v)
                    if img and not target.contains(img):
                        bad.append((n, p, d, "differential leaves F^n"))
                        break
        return bad

    def require_valid(self):
        bad = self.verify()
        if bad:
            raise ComplexError(f"filtration invalid: {bad[0]}")

    def graded_additivity_holds(self):
        for (p, d) in self.ambient.support():
            total = sum(
                self.dim(n, p, d) - self.dim(n + 1, p, d) for n in range(0, self.top + 1)
            )
            if total != self.ambient.dim(p, d):
                return False
        return True

    def graded_piece(self, n):
        """gr^n = F^n / F^{n+1} as a CochainComplex with induced differential."""
        out = CochainComplex(meta={"graded_of": n})
        quotients = {}
        for (p, d) in self.ambient.support():
            q = SubQuotient(self.span_vectors(n + 1, p, d), self.span_vectors(n, p, d))
            quotients[(p, d)] = q
            if q.dim:
                out.set_slice(p, d, [f"gr{n}[{p},{d}]#{k}" for k in range(q.dim)])
        for (p, d), q in quotients.items():
            if not q.dim:
                continue
            tgt = quotients.get((p + 1, d))
            if tgt is None or not tgt.dim:
                continue
            mat = QMatrix(tgt.dim, q.dim)
            amb = self.ambient.diff(p, d)
            for j, rep in enumerate(q.reps):
                img = amb.apply(rep)
                for i, c in tgt.coords(img).items():
                    mat.set(i, j, c)
            out.set_differential(p, d, mat)
        return out

    def associated_graded(self):
        return [self.graded_piece(n) for n in range(0, self.top + 1)]

    def to_json_dict(self):
        levels = []
        for n in sorted(self.levels):
            for (p, d), vecs in sorted(self.levels[n].items()):
                levels.append(
                    {
                        "n": n,
                        "p": p,
                        "d": d,
                        "vectors": [
                            sorted((i, str(c)) for i, c in v.items()) for v in vecs
                        ],
                    }
                )
        return {
            "kind": "filtered_complex",
            "top": self.top,
            "ambient": self.ambient.to_json_dict(),
            "levels": levels,
        }


# -- spectral sequences ----------------------------------------------------


class SpectralSequencePage:
    """One page: dimensions, chosen bases, and the page differential."""

    def __init__(self, r):
        self.r = r
        self.entries = {}        # (s, t) -> dim (summed over internal degrees)
        self.entry_detail = {}   # (s, t, d) -> dim
        self.differentials = {}  # (s, t, d) -> QMatrix into (s+r, t-r+1, d)
        self._spaces = {}        # (s, t, d) -> SubQuotient

    def dim(self, s, t):
        return self.entries.get((s, t), 0)

    def total_dims(self):
        out = {}
        for (s, t), dim in self.entries.items():
            out[s + t] = out.get(s + t, 0) + dim
        return {k: v for k, v in sorted(out.items()) if v}

    def to_json_dict(self):
        entries = [
            {"s": s, "t": t, "dim": dim} for (s, t), dim in sorted(self.entries.items())
        ]
        diffs = []
        for (s, t, d), m in sorted(self.differentials.items()):
            if m.is_zero():
                continue
            diffs.append(
                {
                    "s": s,
                    "t": t,
                    "d": d,
                    "entries": [[i, j, str(v)] for (i, j), v in sorted(m.entries.items())],
                }
            )
        return {"kind": "spectral_sequence_page", "r": self.r, "entries": entries,
                "differentials": diffs}


class WindowTooSmall(ValueError):
    pass


def spectral_sequence(filtered, pages, compare_with_total=False):
    """Pages E_1 .. E_pages of a finitely filtered complex.

    E_r^{s,t} = Z_r^{s,s+t} / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}) computed
    literally, per internal degree.  The page differential is induced by the
    ambient differential on representatives.  Raises WindowTooSmall when a
    requested page needs a cohomological slice outside the stored window.
    """
    amb = filtered.ambient
    top = filtered.top
    pmin, pmax = amb.cohomological_range()
    degrees = amb.internal_degrees()
    zcache = {}

    def zspace(r, s, n, d):
        """Z_r^{s,n}: vectors of F^s C^n with d v in F^{s+r} C^{n+1}.

        Negative indices follow F^m = F^0 for m <= 0, but the target level
        s + r is computed from the original s.
        """
        tgt_level = min(max(s + r, 0), top + 1)
        s = max(s, 0)
        key = (s, n, d, tgt_level)
        if key in zcache:
            return zcache[key]
        base = filtered.span_vectors(s, n, d)
        if not base:
            zcache[key] = []
            return []
        mat = amb.diff(n, d)
        tgt = filtered.echelon(tgt_level, n + 1, d)
        residues = []
        for v in base:
            rres, _ = tgt.reduce(mat.apply(v))
            residues.append(rres)
        rmat = QMatrix.from_columns(residues, amb.dim(n + 1, d))
        out = []
        for ker in kernel_basis(rmat):
            acc = {}
            for j, c in ker.items():
                vec_axpy(acc, c, base[j])
            if acc:
                out.append(acc)
        zcache[key] = out
        return out

    result = []
    for r in range(1, pages + 1):
        page = SpectralSequencePage(r)
        spaces_all = {}
        for d in degrees:
            for n in range(pmin, pmax + 2):
                for s in range(0, top + 1):
                    t = n - s
                    z_top = zspace(r, s, n, d)
                    sub_vectors = list(zspace(r - 1, s + 1, n, d))
                    lower = zspace(r - 1, s - r + 1, n - 1, d)
                    mat = amb.diff(n - 1, d)
                    for v in lower:
                        img = mat.apply(v)
                        if img:
                            sub_vectors.append(img)
                    space = SubQuotient(sub_vectors, z_top)
                    spaces_all[(s, t, d)] = space
                    if space.dim:
                        page._spaces[(s, t, d)] = space
                        page.entry_detail[(s, t, d)] = space.dim
                        page.entries[(s, t)] = page.entries.get((s, t), 0) + space.dim
        # page differential d_r: (s,t) -> (s+r, t-r+1)
        for (s, t, d), space in page._spaces.items():
            n = s + t
            tgt_key = (s + r, t - r + 1, d)
            tgt = spaces_all.get(tgt_key)
            mat = amb.diff(n, d)
            out = QMatrix(tgt.dim if tgt else 0, space.dim)
            for j, rep in enumerate(space.reps):
                img = mat.apply(rep)
                if not img:
                    continue
                if tgt is None:
                    raise WindowTooSmall(
                        f"d_{r} out of ({s},{t},{d}) leaves the stored window"
                    )
                for i, c in tgt.coords(img).items():
                    out.set(i, j, c)
            page.differentials[(s, t, d)] = out
        result.append(page)
    if compare_with_total:
        last = result[-1]
        for d in degrees:
            for n in range(pmin, pmax + 1):
                total = sum(
                    last.entry_detail.get((s, n - s, d), 0) for s in range(0, top + 1)
                )
                hdim, _ = amb.cohomology_basis(n, d)
                if total != hdim:
                    raise ComplexError(
                        f"E_infinity total {total} != dim H^{n} = {hdim} at d={d}"
                    )
    return result


def page_homology_dims(page):
    """Dims of H(E_r, d_r): the independent recomputation of the next page."""
    out = {}
    keys = set(page.entry_detail)
    for (s, t, d) in keys:
        outgoing = page.differentials.get((s, t, d))
        rank_out = 0
        if outgoing is not None and not outgoing.is_zero():
            from .qlinalg import rank as qrank

            rank_out = qrank(outgoing)
        incoming = page.differentials.get((s - page.r, t + page.r - 1, d))
        rank_in = 0
        if incoming is not None and not incoming.is_zero():
            from .qlinalg import rank as qrank

            rank_in = qrank(incoming)
        dim = page.entry_detail[(s, t, d)] - rank_out - rank_in
        if dim:
            out[(s, t, d)] = dim
    return out


# -- bifiltrations ----------------------------------------------------------


class BiFilteredComplex:
    """Doubly indexed decreasing filtration given by a selector rule."""

    def __init__(self, ambient, selector, top_i, top_j, meta=None):
        self.ambient = ambient
        self._selector = selector  # (i, j, p, d) -> list of vectors
        self.top_i = top_i
        self.top_j = top_j
        self.meta = dict(meta or {})

    def span_vectors(self, i, j, p, d):
        return self._selector(i, j, p, d)

    def dim(self, i, j, p, d):
        ech = Echelon()
        for v in self.span_vectors(i, j, p, d):
            ech.add(dict(v))
        return ech.dim

    def verify_monotone(self):
        bad = []
        for (p, d) in self.ambient.support():
            for i in range(0, self.top_i + 1):
                for j in range(0, self.top_j + 1):
                    ech = Echelon()
                    for v in self.span_vectors(i, j, p, d):
                        ech.add(dict(v))
                    for (i2, j2) in ((i + 1, j), (i, j + 1)):
                        for v in self.span_vectors(i2, j2, p, d):
                            if not ech.contains(dict(v)):
                                bad.append((i, j, p, d))
        return bad

    def graded_piece_dim(self, i, j, p, d):
        """Total-cofiber dimension of the (i, j) square on slice (p, d).

        Valid as a plain dimension count because the square of inclusions is
        cartesian (checked): F^{i+1,j} & F^{i,j+1} = F^{i+1,j+1}.
        """
        f = lambda a, b: self.span_vectors(a, b, p, d)
        e00 = Echelon()
        for v in f(i, j):
            e00.add(dict(v))
        e10 = Echelon()
        for v in f(i + 1, j):
            e10.add(dict(v))
        e01 = Echelon()
        for v in f(i, j + 1):
            e01.add(dict(v))
        e11 = Echelon()
        for v in f(i + 1, j + 1):
            e11.add(dict(v))
        from .qlinalg import intersect_spans

        n = self.ambient.dim(p, d)
        inter = intersect_spans(e10.basis(), e01.basis(), n)
        if len(inter) != e11.dim:
            raise ComplexError(
                f"bifiltration square at ({i},{j}) is not cartesian on ({p},{d})"
            )
        return e00.dim - e10.dim - e01.dim + e11.dim


def delta_shriek(filtered):
    """Diagonal bifiltration: F^{i,j} = F^{max(i,j)}."""

    def selector(i, j, p, d):
        return filtered.span_vectors(max(i, j), p, d)

    return BiFilteredComplex(
        filtered.ambient, selector, filtered.top, filtered.top, meta={"kind": "delta"}
    )


def chi_shriek(filtered):
    """Zeroth-column bifiltration: F^{0,j} = F^j and F^{i,j} = 0 for i > 0."""

    def selector(i, j, p, d):
        if i > 0:
            return []
        return filtered.span_vectors(j, p, d)

    return BiFilteredComplex(
        filtered.ambient, selector, filtered.top, filtered.top, meta={"kind": "chi"}
    )


# -- image filtrations -------------------------------------------------------


def image_filtration(ring_filtered, module, act, top=None, free_graded_pieces=False):
    """F^n_h(module) = span of products F^n(ring) * module, slicewise.

    act(rslice, rvec, mslice, mvec) -> (out_slice, out_vector) realizes the
    module structure.  The flatness report compares dim gr^i_h against the
    free-tensor count sum dim gr^i(ring) * dim gr^0_h when the ring's graded
    pieces act freely (free_graded_pieces), which is the only case where that
    count equals the honest tensor dimension.
    """
    ring_amb = ring_filtered.ambient
    top = ring_filtered.top if top is None else top
    levels = {}
    for n in range(1, top + 1):
        per_slice = {}
        for rkey in ring_amb.support():
            rvecs = ring_filtered.span_vectors(n, rkey[0], rkey[1])
            if not rvecs:
                continue
            for mkey in module.support():
                for rv in rvecs:
                    for idx in range(module.dim(mkey[0], mkey[1])):
                        out = act(rkey, rv, mkey, {idx: FONE})
                        if out is None:
                            continue
                        okey, ovec = out
                        if ovec:
                            per_slice.setdefault(okey, []).append(ovec)
        levels[n] = per_slice
    filt = FilteredComplex(module, levels, top)
    report = {"flatness": []}
    if free_graded_pieces:
        gr0 = {key: filt.dim(0, *key) - filt.dim(1, *key) for key in module.support()}
        ring_gr = {}
        for i in range(0, top + 1):
            for rkey in ring_amb.support():
                dim = ring_filtered.dim(i, *rkey) - ring_filtered.dim(i + 1, *rkey)
                if dim:
                    ring_gr[(i,) + rkey] = dim
        for i in range(1, top + 1):
            for mkey in module.support():
                expected = 0
                for (ri, rp, rd), rdim in ring_gr.items():
                    if ri != i:
                        continue
                    src = gr0.get((mkey[0] - rp, mkey[1] - rd), 0)
                    expected += rdim * src
                actual = filt.dim(i, *mkey) - filt.dim(i + 1, *mkey)
                report["flatness"].append(
                    {"i": i, "slice": mkey, "gr_h": actual, "tensor": expected,
                     "flat": actual == expected}
                )
    return filt, report


# -- randomized fixtures ------------------------------------------------------


def random_filtered_complex(rng, max_dim=4, steps=3, length=2):
    """A random finite filtered complex over Q for law checking.

    Differentials are built left to right inside the kernel of the next map,
    so d^2 = 0 holds by construction; filtration levels are random subspaces
    closed up under the differential.
    """
    dims = [rng.randrange(1, max_dim + 1) for _ in range(length + 1)]
    amb = CochainComplex()
    for p, dim in enumerate(dims):
        amb.set_slice(p, 0, [f"e{p}_{k}" for k in range(dim)])
    # build from the right so that im(d_p) lands inside ker(d_{p+1})
    mats = []
    next_mat = None
    for p in range(length - 1, -1, -1):
        rowdim, coldim = dims[p + 1], dims[p]
        m = QMatrix(rowdim, coldim)
        if next_mat is None:
            for i in range(rowdim):
                for j in range(coldim):
                    if rng.random() < 0.5:
                        m.set(i, j, rng.randrange(-2, 3))
        else:
            ker = kernel_basis(next_mat)
            for j in range(coldim):
                acc = {}
                for kv in ker:
                    c = rng.randrange(-2, 3)
                    if c:
                        vec_axpy(acc, Fraction(c), kv)
                for i, v in acc.items():
                    m.set(i, j, v)
        mats.insert(0, m)
        next_mat = m
    for p, m in enumerate(mats):
        amb.set_differential(p, 0, m)
    amb.require_valid()
    # random differential-stable nested subspaces
    levels = {}
    prev_spans = None
    for n in range(1, steps + 1):
        spans = {}
        for p in range(length + 1):
            dim = dims[p]
            pool = (
                prev_spans.get((p, 0), [{i: FONE} for i in range(dim)])
                if prev_spans is not None
                else [{i: FONE} for i in range(dim)]
            )
            chosen = []
            for v in pool:
                if rng.random() < 0.6:
                    chosen.append(dict(v))
            spans[(p, 0)] = chosen
        # close up under d
        for p in range(length + 1):
            extra = []
            for v in spans.get((p, 0), []):
                img = mats[p].apply(v) if p < length else {}
                if img:
                    extra.append(img)
            if extra:
                spans.setdefault((p + 1, 0), []).extend(extra)
        levels[n] = spans
        prev_spans = spans
    filt = FilteredComplex(amb, levels, steps)
    filt.require_valid()
    return filt
