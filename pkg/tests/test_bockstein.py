from derhamgm.bockstein import (
    bockstein_pages,
    bockstein_vs_snf_homology,
    integral_homology,
    padic_module_filtration,
)


def test_snf_homology_of_multiplication_by_two():
    # 0 -> Z --2--> Z -> 0
    hom = integral_homology([1, 1], [[[2]]])
    assert hom[0] == (0, [])
    assert hom[1] == (0, [2])


def test_bockstein_two_lines_and_collapse():
    pages = bockstein_pages([1, 1], [[[2]]], p=2, pages=3)
    e1, e2, e3 = pages
    assert e1.dims == {0: 1, 1: 1}
    assert e1.diff_ranks == {0: 1}  # d_1 is an isomorphism
    assert e2.dims == {}
    assert e3.dims == {}


def test_bockstein_matches_snf_oracle():
    pages, hom, verdicts = bockstein_vs_snf_homology([1, 1], [[[2]]], p=2, pages=3)
    assert all(v["matches_snf_homology"] for v in verdicts)
    assert hom[1] == (0, [2])


def test_bockstein_p3_torsion_survives_longer():
    # 0 -> Z --8--> Z -> 0 at p = 2: Z/8 torsion lives to E_3, dies at E_4
    pages, hom, verdicts = bockstein_vs_snf_homology([1, 1], [[[8]]], p=2, pages=5)
    assert hom[1] == (0, [8])
    dims = [pg.dims.get(0, 0) + pg.dims.get(1, 0) for pg in pages]
    assert dims == [2, 2, 2, 0, 0]
    assert all(v["matches_snf_homology"] for v in verdicts)


def test_bockstein_free_part_survives():
    # 0 -> Z --0--> Z -> 0: free classes persist on every page
    pages, hom, verdicts = bockstein_vs_snf_homology([1, 1], [[[0]]], p=2, pages=4)
    assert hom[0] == (1, []) and hom[1] == (1, [])
    for pg in pages:
        assert pg.dims == {0: 1, 1: 1}
        assert pg.diff_ranks == {}
    assert all(v["matches_snf_homology"] for v in verdicts)


def test_padic_image_filtration_of_z_mod_p_squared():
    report = padic_module_filtration([4], p=2, steps=3)
    by_n = {row["n"]: row for row in report}
    assert [by_n[n]["gr_dim"] for n in range(4)] == [1, 1, 0, 0]
    assert by_n[0]["flat"] and by_n[1]["flat"]
    assert by_n[2]["torsion_caveat"] and by_n[3]["torsion_caveat"]
