import random
from fractions import Fraction

from derhamgm.qlinalg import (
    Echelon,
    QMatrix,
    Quotient,
    intersect_spans,
    kernel_basis,
    rank,
    solve,
    span_dim,
)


def test_kernel_identity_empty():
    assert kernel_basis(QMatrix.identity(3)) == []


def test_kernel_zero_matrix_standard_basis():
    m = QMatrix(2, 3)
    ker = kernel_basis(m)
    assert ker == [{0: 1}, {1: 1}, {2: 1}]


def test_kernel_rank_one():
    m = QMatrix.from_dense([[1, 2], [2, 4]])
    ker = kernel_basis(m)
    assert ker == [{0: Fraction(-2), 1: Fraction(1)}]
    assert not m.apply(ker[0])


def test_rank_nullity_on_random_sparse():
    rng = random.Random(7)
    for _ in range(200):
        rows = rng.randrange(1, 41)
        cols = rng.randrange(1, 41)
        m = QMatrix(rows, cols)
        for _ in range(rng.randrange(0, rows * cols // 2 + 1)):
            m.set(rng.randrange(rows), rng.randrange(cols), rng.randrange(-5, 6))
        assert rank(m) + len(kernel_basis(m)) == cols


def test_solve_consistent_and_inconsistent():
    m = QMatrix.from_dense([[1, 1], [0, 1]])
    x = solve(m, {0: Fraction(3), 1: Fraction(1)})
    assert m.apply(x) == {0: Fraction(3), 1: Fraction(1)}
    m2 = QMatrix.from_dense([[1, 2], [2, 4]])
    assert solve(m2, {0: Fraction(1), 1: Fraction(0)}) is None


def test_echelon_membership_certificate():
    ech = Echelon()
    v0 = {0: Fraction(1), 1: Fraction(2)}
    v1 = {1: Fraction(1), 2: Fraction(1)}
    ech.add(v0, tag="a")
    ech.add(v1, tag="b")
    target = {0: Fraction(2), 1: Fraction(5), 2: Fraction(1)}
    residue, combo = ech.reduce(target)
    assert not residue
    rebuilt = {}
    for tag, c in combo.items():
        src = v0 if tag == "a" else v1
        for i, v in src.items():
            rebuilt[i] = rebuilt.get(i, Fraction(0)) + c * v
    assert {k: v for k, v in rebuilt.items() if v} == target


def test_quotient_coordinates():
    # Q^3 / span{(1,1,0)}: classes of e1, e2 form the canonical basis
    q = Quotient(3, [{0: Fraction(1), 1: Fraction(1)}])
    assert q.dim == 2
    c = q.coords({0: Fraction(1)})
    # e0 = (1,1,0) - e1 modulo the subspace
    assert c == {0: Fraction(-1)}
    assert q.coords({1: Fraction(1), 2: Fraction(3)}) == {0: Fraction(1), 1: Fraction(3)}


def test_intersection_of_spans():
    a = [{0: Fraction(1)}, {1: Fraction(1)}]
    b = [{1: Fraction(1)}, {2: Fraction(1)}]
    inter = intersect_spans(a, b, 3)
    assert len(inter) == 1 and inter[0] == {1: Fraction(1)}
    assert span_dim(a + b) == 3
