"""Smith normal form over Euclidean domains (Z and Q[t^{pm 1}]).

One diagonalization routine drives both the integer homology path (Bockstein)
and the freeness certificates over the Laurent base ring.  Matrices here are
small dense lists of lists; pivot choice is by minimal Euclidean size with
(row, col) as the tie-break, so outputs are deterministic.
"""

from fractions import Fraction

from .laurent import LPoly


class IntDomain:
    name = "Z"

    zero = 0
    one = 1

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def is_unit(a):
        return a in (1, -1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def divmod(a, b):
        q, r = divmod(a, b)
        # symmetric remainder keeps sizes small; python's r has b's sign,
        # so stepping q once more always moves r to the short side
        if r and 2 * abs(r) > abs(b):
            q, r = q + 1, r - b
        return q, r

    @staticmethod
    def size(a):
        return abs(a)

    @staticmethod
    def canonical_unit(a):
        """Unit u with a/u canonical (positive)."""
        return -1 if a < 0 else 1

    @staticmethod
    def exact_div(a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} not divisible by {b}")
        return q


class LaurentDomain:
    name = "Q[t^±1]"

    zero = LPoly.zero()
    one = LPoly.const(1)

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def is_unit(a):
        return a.is_unit()

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def divmod(a, b):
        return a.divmod(b)

    @staticmethod
    def size(a):
        return a.span()

    @staticmethod
    def canonical_unit(a):
        """Unit u with a/u monic of valuation 0."""
        return LPoly({a.val(): a.c[a.deg()]})

    @staticmethod
    def exact_div(a, b):
        q, r = a.divmod(b)
        if not r.is_zero():
            raise ArithmeticError("not divisible")
        return q


def _matmul(dom, a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[dom.zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = dom.zero
            for t in range(k):
                if not dom.is_zero(a[i][t]) and not dom.is_zero(b[t][j]):
                    s = dom.add(s, dom.mul(a[i][t], b[t][j]))
            out[i][j] = s
    return out


class SmithForm:
    """Result bundle: U @ A @ V == D with U, V invertible over the domain."""

    def __init__(self, domain, diag, U, V, shape):
        self.domain = domain
        self.diag = diag  # nonzero invariant factors d_1 | d_2 | ...
        self.U = U
        self.V = V
        self.shape = shape

    @property
    def rank(self):
        return len(self.diag)

    def diagonal_matrix(self):
        m, n = self.shape
        dom = self.domain
        D = [[dom.zero for _ in range(n)] for _ in range(m)]
        for i, d in enumerate(self.diag):
            D[i][i] = d
        return D


def smith_normal_form(matrix, domain=IntDomain):
    """Diagonalize over a Euclidean domain; returns a SmithForm.

    The invariant factors are canonical (positive integers / monic valuation-0
    Laurent polynomials) and satisfy d_i | d_{i+1}.
    """
    dom = domain
    A = [list(row) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[dom.one if i == j else dom.zero for j in range(m)] for i in range(m)]
    V = [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in A:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def row_op(i, j, q):
        # row_i -= q * row_j
        for t in range(n):
            A[i][t] = dom.sub(A[i][t], dom.mul(q, A[j][t]))
        for t in range(m):
            U[i][t] = dom.sub(U[i][t], dom.mul(q, U[j][t]))

    def col_op(i, j, q):
        # col_i -= q * col_j
        for r in A:
            r[i] = dom.sub(r[i], dom.mul(q, r[j]))
        for r in V:
            r[i] = dom.sub(r[i], dom.mul(q, r[j]))

    def scale_row(i, u_inv):
        for t in range(n):
            A[i][t] = dom.mul(A[i][t], u_inv)
        for t in range(m):
            U[i][t] = dom.mul(U[i][t], u_inv)

    s = 0
    while s < min(m, n):
        # pivot: nonzero entry of minimal size, ties to smallest (row, col)
        best = None
        for i in range(s, m):
            for j in range(s, n):
                if not dom.is_zero(A[i][j]):
                    key = (dom.size(A[i][j]), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(s, bi)
        swap_cols(s, bj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(s + 1, m):
                if dom.is_zero(A[i][s]):
                    continue
                q, r = dom.divmod(A[i][s], A[s][s])
                row_op(i, s, q)
                if not dom.is_zero(r):
                    swap_rows(s, i)
                    dirty = True
            for j in range(s + 1, n):
                if dom.is_zero(A[s][j]):
                    continue
                q, r = dom.divmod(A[s][j], A[s][s])
                col_op(j, s, q)
                if not dom.is_zero(r):
                    swap_cols(s, j)
                    dirty = True
        # divisibility sweep: d_s must divide every remaining entry
        fixed = False
        for i in range(s + 1, m):
            for j in range(s + 1, n):
                if dom.is_zero(A[i][j]):
                    continue
                _, r = dom.divmod(A[i][j], A[s][s])
                if not dom.is_zero(r):
                    row_op(s, i, dom.neg(dom.one))  # row_s += row_i
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        u = dom.canonical_unit(A[s][s])
        if not dom.is_unit(u):
            raise AssertionError("canonical_unit must return a unit")
        scale_row(s, _unit_inverse(dom, u))
        s += 1

    diag = [A[i][i] for i in range(s)]
    return SmithForm(dom, diag, U, V, (m, n))


def _unit_inverse(dom, u):
    if isinstance(u, int):
        return u  # 1 or -1
    return u.unit_inverse()


def _apply(dom, M, vec):
    return [
        _dot(dom, row, vec)
        for row in M
    ]


def _dot(dom, row, vec):
    s = dom.zero
    for a, b in zip(row, vec):
        if not dom.is_zero(a) and not dom.is_zero(b):
            s = dom.add(s, dom.mul(a, b))
    return s


def kernel_over(matrix, domain=IntDomain, ncols=None):
    """Basis (columns) of the kernel of matrix over the domain."""
    m = len(matrix)
    n = len(matrix[0]) if m else (ncols or 0)
    if n == 0:
        return []
    if m == 0:
        one, zero = domain.one, domain.zero
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    snf = smith_normal_form(matrix, domain)
    cols = []
    for j in range(snf.rank, n):
        cols.append([snf.V[i][j] for i in range(n)])
    return cols


def solve_over(matrix, target, domain=IntDomain):
    """Solve matrix @ x = target over the domain; None when unsolvable."""
    dom = domain
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    snf = smith_normal_form(matrix, domain)
    ub = _apply(dom, snf.U, target)
    y = [dom.zero] * n
    for i in range(m):
        if i < snf.rank:
            try:
                y[i] = dom.exact_div(ub[i], snf.diag[i])
            except ArithmeticError:
                return None
        elif not dom.is_zero(ub[i]):
            return None
    return _apply(dom, snf.V, y)


def cokernel_invariants(matrix, rows, domain=IntDomain):
    """Cokernel of matrix acting into domain^rows: (free_rank, torsion list)."""
    if not matrix or not matrix[0]:
        return rows, []
    snf = smith_normal_form(matrix, domain)
    torsion = [d for d in snf.diag if not domain.is_unit(d)]
    return rows - snf.rank, torsion
