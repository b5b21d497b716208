from fractions import Fraction

import pytest

from derhamgm.poly import Poly, Ring, mon_mul
from derhamgm.parsing import parse_poly
from derhamgm.qlinalg import Echelon, QMatrix, kernel_basis, rank
from derhamgm.resolutions import DegreeBoundError, free_resolution


def _ideal_presentation(ring, gens_txt):
    cols = []
    for txt in gens_txt:
        p = parse_poly(ring, txt)
        cols.append({(0, m): c for m, c in p.terms.items()})
    return cols


def degreewise_syzygy_oracle(ring, columns, src_degrees, max_degree):
    """Independent direct syzygy solve: literal kernels degree by degree.

    Enumerates the free-cover slice in each internal degree, takes the kernel
    of the evaluation matrix, and keeps vectors independent of multiples of
    generators already found.  Pure linear algebra, no Groebner machinery.
    """
    col_degrees = []
    for col in columns:
        degs = {src_degrees[pos] + ring.mon_weight(m) for (pos, m) in col}
        assert len(degs) == 1
        col_degrees.append(degs.pop())
    gens = []  # (module element over column positions, degree)
    for d in range(0, max_degree + 1):
        cover = [
            (i, mon)
            for i, cd in enumerate(col_degrees)
            for mon in ring.standard_monomials(d - cd)
        ]
        if not cover:
            continue
        cover_pos = {cm: k for k, cm in enumerate(cover)}
        target_idx = {}
        mat_entries = {}
        for k, (i, mon) in enumerate(cover):
            for (pos, m), c in columns[i].items():
                key = (pos, mon_mul(m, mon))
                r = target_idx.setdefault(key, len(target_idx))
                mat_entries[(r, k)] = mat_entries.get((r, k), Fraction(0)) + c
        mat = QMatrix(len(target_idx), len(cover))
        for (r, k), v in mat_entries.items():
            if v:
                mat.entries[(r, k)] = v
        kernel = kernel_basis(mat)
        ech = Echelon()
        for g, gdeg in gens:
            for mon in ring.standard_monomials(d - gdeg):
                vec = {}
                for (pos, m), c in g.items():
                    idx = cover_pos[(pos, mon_mul(m, mon))]
                    vec[idx] = vec.get(idx, Fraction(0)) + c
                ech.add({k: v for k, v in vec.items() if v})
        for kv in kernel:
            if not ech.contains(kv):
                ech.add(kv)
                gens.append(({cover[idx]: c for idx, c in kv.items()}, d))
    return [g for g, _ in gens]


def _slice_matrix(ring, res, level, degree):
    """Matrix of d_level on the internal-degree slice; returns (mat, dim dom)."""
    src_degs = res.gen_degrees[level]
    tgt_degs = res.gen_degrees[level - 1]
    domain = [
        (i, mon)
        for i, cd in enumerate(src_degs)
        for mon in ring.standard_monomials(degree - cd)
    ]
    target_idx = {}
    for j, td in enumerate(tgt_degs):
        for mon in ring.standard_monomials(degree - td):
            target_idx[(j, mon)] = len(target_idx)
    mat = QMatrix(len(target_idx), len(domain))
    for k, (i, mon) in enumerate(domain):
        for (pos, m), c in res.differentials[level - 1][i].items():
            r = target_idx[(pos, mon_mul(m, mon))]
            mat.set(r, k, mat.get(r, k) + c)
    return mat, len(domain)


def test_koszul_resolution_ranks():
    ring = Ring(["x", "y"])
    pres = _ideal_presentation(ring, ["x", "y"])
    res = free_resolution(ring, pres, [0], length=4)
    assert res.ranks() == [1, 2, 1]
    assert res.verify_composites()
    (col,) = res.differentials[1]
    as_polys = {}
    for (pos, mon), c in col.items():
        as_polys.setdefault(pos, Poly(ring))
        as_polys[pos].terms[mon] = c
    # second differential is (y, -x) transpose up to overall sign
    pair = (as_polys[0], as_polys[1])
    y, x = ring.var("y"), ring.var("x")
    assert pair in (((y), (-x)), ((-y), (x)))


def test_principal_ideal_resolution():
    ring = Ring(["x"])
    res = free_resolution(ring, _ideal_presentation(ring, ["x^2"]), [0], length=3)
    assert res.ranks() == [1, 1]
    assert res.gen_degrees[1] == [2]


def test_x2_xy_resolution_matches_direct_syzygy_oracle():
    ring = Ring(["x", "y"])
    pres = _ideal_presentation(ring, ["x^2", "x*y"])
    res = free_resolution(ring, pres, [0], length=4)
    assert res.ranks() == [1, 2, 1]
    assert res.verify_composites()
    oracle = degreewise_syzygy_oracle(ring, pres, [0], max_degree=6)
    assert len(oracle) == 1
    (g,) = oracle
    assert {2 + ring.mon_weight(m) for (_, m) in g} == {3}
    # exactness at homological degree 1 in internal degrees <= 6
    for d in range(0, 7):
        mat1, dom1 = _slice_matrix(ring, res, 1, d)
        k1 = dom1 - rank(mat1)
        mat2, _ = _slice_matrix(ring, res, 2, d)
        assert k1 == rank(mat2)


def test_resolution_homology_vanishes_on_window():
    ring = Ring(["x", "y"])
    pres = _ideal_presentation(ring, ["x^2", "x*y", "y^3"])
    res = free_resolution(ring, pres, [0], length=5)
    assert res.verify_composites()
    for level in range(1, len(res.differentials)):
        for d in range(0, 7):
            mat_hi, _ = _slice_matrix(ring, res, level + 1, d) if level < len(
                res.differentials
            ) else (QMatrix(0, 0), 0)
            mat_lo, dom = _slice_matrix(ring, res, level, d)
            assert dom - rank(mat_lo) == rank(mat_hi)


def test_degree_bound_diagnostic():
    ring = Ring(["x", "y"])
    pres = _ideal_presentation(ring, ["x^2", "x*y"])
    with pytest.raises(DegreeBoundError):
        free_resolution(ring, pres, [0], length=4, degree_bound=2)
