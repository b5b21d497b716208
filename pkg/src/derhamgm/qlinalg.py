"""Exact sparse linear algebra over the rationals.

Vectors are dicts {index: Fraction} that never store zeros; matrices are
sparse coordinate maps.  All elimination is deterministic: pivots are chosen
in the leftmost column first, then the smallest row index, so echelon bases
and kernel bases are reproducible bit for bit.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_axpy(acc, coeff, vec):
    """acc += coeff * vec, in place, dropping entries that cancel."""
    if not coeff:
        return acc
    for i, v in vec.items():
        s = acc.get(i, ZERO) + coeff * v
        if s:
            acc[i] = s
        else:
            acc.pop(i, None)
    return acc


def vec_scale(vec, coeff):
    if not coeff:
        return {}
    return {i: coeff * v for i, v in vec.items()}


def vec_sub(a, b):
    out = dict(a)
    return vec_axpy(out, -ONE, b)


class QMatrix:
    """Sparse matrix over Q with coordinate-list storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                self.set(i, j, v)

    @classmethod
    def from_dense(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        m = cls(rows, cols)
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if v:
                    m.entries[(i, j)] = Fraction(v)
        return m

    @classmethod
    def from_columns(cls, columns, rows):
        """Build from an iterable of {row: value} dicts."""
        columns = list(columns)
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    m.entries[(i, j)] = Fraction(v)
        return m

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.entries[(i, i)] = ONE
        return m

    def set(self, i, j, v):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        v = Fraction(v)
        if v:
            self.entries[(i, j)] = v
        else:
            self.entries.pop((i, j), None)

    def get(self, i, j):
        return self.entries.get((i, j), ZERO)

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def apply(self, vec):
        """Matrix-vector product; vec is {col: value}."""
        out = {}
        for j, c in vec.items():
            if not c:
                continue
            for (i, jj), v in self.entries.items():
                if jj == j:
                    s = out.get(i, ZERO) + c * v
                    if s:
                        out[i] = s
                    else:
                        out.pop(i, None)
        return out

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = QMatrix(self.rows, other.cols)
        by_row = {}
        for (i, j), v in self.entries.items():
            by_row.setdefault(i, {})[j] = v
        by_col = {}
        for (i, j), v in other.entries.items():
            by_col.setdefault(j, {})[i] = v
        for i, row in by_row.items():
            for j, col in by_col.items():
                s = ZERO
                for k, v in row.items():
                    w = col.get(k)
                    if w is not None:
                        s += v * w
                if s:
                    out.entries[(i, j)] = s
        return out

    def transpose(self):
        out = QMatrix(self.cols, self.rows)
        out.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return out

    def is_zero(self):
        return not self.entries

    def to_dense(self):
        return [[self.get(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def _row_echelon(mat):
    """Row-reduce a copy of mat; returns (rows as dicts, pivot cols).

    Rows come out fully reduced (RREF) with unit pivots.
    """
    rows = [dict() for _ in range(mat.rows)]
    for (i, j), v in mat.entries.items():
        rows[i][j] = v
    pivots = []  # (col, row-position-in-reduced-list)
    reduced = []
    for col in range(mat.cols):
        pivot_row = None
        for idx in range(len(rows)):
            if rows[idx].get(col):
                pivot_row = idx
                break
        if pivot_row is None:
            continue
        pivot = rows.pop(pivot_row)
        inv = ONE / pivot[col]
        pivot = {j: v * inv for j, v in pivot.items()}
        for other in rows:
            c = other.get(col)
            if c:
                vec_axpy(other, -c, pivot)
        for other in reduced:
            c = other.get(col)
            if c:
                vec_axpy(other, -c, pivot)
        reduced.append(pivot)
        pivots.append(col)
    return reduced, pivots


def rank(mat):
    return len(_row_echelon(mat)[1])


def kernel_basis(mat):
    """Basis of the right kernel, one {col: value} dict per basis vector.

    Echelon-normalized: each free column contributes the vector with a 1 in
    that coordinate, computed from the RREF; pivot columns are leftmost-first.
    """
    reduced, pivots = _row_echelon(mat)
    pivot_set = set(pivots)
    basis = []
    for free in range(mat.cols):
        if free in pivot_set:
            continue
        vec = {free: ONE}
        for prow, pcol in zip(reduced, pivots):
            c = prow.get(free)
            if c:
                vec[pcol] = -c
        basis.append({k: v for k, v in sorted(vec.items())})
    return basis


def solve(mat, target):
    """One solution x of mat*x = target ({row: value}), or None.

    Free variables are set to zero, so the solution is deterministic.
    """
    aug = QMatrix(mat.rows, mat.cols + 1, dict(mat.entries))
    for i, v in target.items():
        if v:
            aug.entries[(i, mat.cols)] = Fraction(v)
    reduced, pivots = _row_echelon(aug)
    sol = {}
    for prow, pcol in zip(reduced, pivots):
        if pcol == mat.cols:
            return None
        c = prow.get(mat.cols)
        if c:
            sol[pcol] = c
    return sol


class Echelon:
    """Reduced echelon span of vectors with combination tracking.

    Each stored basis vector remembers how it was assembled from the vectors
    passed to add(), so membership tests come with certificates (lifts).
    """

    def __init__(self):
        self._pivots = {}  # pivot index -> (vector, combo)

    @property
    def dim(self):
        return len(self._pivots)

    def pivot_indices(self):
        return sorted(self._pivots)

    def reduce(self, vec, combo=None):
        """Reduce vec against the span; returns (residue, combo).

        vec == residue + sum(combo[tag] * original_vector(tag)).
        """
        residue = dict(vec)
        combo = dict(combo) if combo else {}
        for piv in sorted(self._pivots):
            c = residue.get(piv)
            if c:
                pvec, pcombo = self._pivots[piv]
                vec_axpy(residue, -c, pvec)
                for tag, coeff in pcombo.items():
                    s = combo.get(tag, ZERO) + c * coeff
                    if s:
                        combo[tag] = s
                    else:
                        combo.pop(tag, None)
        return residue, combo

    def add(self, vec, tag=None):
        """Insert vec; returns the new pivot index or None if dependent."""
        residue, combo = self.reduce(vec)
        if not residue:
            return None
        piv = min(residue)
        inv = ONE / residue[piv]
        residue = {i: v * inv for i, v in residue.items()}
        own = {tag: inv} if tag is not None else {}
        for t, c in combo.items():
            s = own.get(t, ZERO) - c * inv  # residue = inv*(vec - sum combo*orig)
            if s:
                own[t] = s
            else:
                own.pop(t, None)
        # keep RREF: clear the new pivot coordinate from existing rows
        for other_piv, (ovec, ocombo) in self._pivots.items():
            c = ovec.get(piv)
            if c:
                vec_axpy(ovec, -c, residue)
                for t, coeff in own.items():
                    s = ocombo.get(t, ZERO) + (-c) * coeff
                    if s:
                        ocombo[t] = s
                    else:
                        ocombo.pop(t, None)
        self._pivots[piv] = (residue, own)
        return piv

    def contains(self, vec):
        residue, _ = self.reduce(vec)
        return not residue

    def basis(self):
        return [dict(self._pivots[p][0]) for p in sorted(self._pivots)]


def span_dim(vectors):
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.dim


def intersect_spans(avecs, bvecs, n):
    """Basis of span(avecs) & span(bvecs) inside Q^n."""
    avecs = list(avecs)
    bvecs = list(bvecs)
    if not avecs or not bvecs:
        return []
    mat = QMatrix.from_columns(avecs + [vec_scale(b, -ONE) for b in bvecs], n)
    out = Echelon()
    for ker in kernel_basis(mat):
        combo = {}
        for j, c in ker.items():
            if j < len(avecs):
                vec_axpy(combo, c, avecs[j])
        if combo:
            out.add(combo)
    return out.basis()


class Quotient:
    """Quotient of Q^n by a subspace, with canonical coordinates.

    The classes of the coordinate vectors e_i for i outside the subspace's
    pivot set form the basis; coords() reduces and reads off those entries.
    """

    def __init__(self, n, sub_vectors=()):
        self.n = n
        self.sub = Echelon()
        for v in sub_vectors:
            self.sub.add(v)
        pivot_set = set(self.sub.pivot_indices())
        self.basis_indices = [i for i in range(n) if i not in pivot_set]
        self._pos = {i: k for k, i in enumerate(self.basis_indices)}

    @property
    def dim(self):
        return len(self.basis_indices)

    def coords(self, vec):
        """Coordinates of the class of vec in the canonical basis."""
        residue, _ = self.sub.reduce(vec)
        out = {}
        for i, v in residue.items():
            out[self._pos[i]] = v
        return out

    def lift(self, coords):
        """Canonical representative of a coordinate vector."""
        return {self.basis_indices[k]: v for k, v in coords.items() if v}
