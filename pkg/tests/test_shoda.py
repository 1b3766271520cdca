import pytest

from metacode import groups as gr
from metacode import shoda as sh


def verified_catalog(G, bound=10_000):
    pairs = sh.ssp_catalog(G)
    for pair in pairs:
        ok, why = sh.verify_ssp(G, pair, bound)
        assert ok, f"{G.name}: {pair.label()}: {why}"
    return pairs


def test_generic_split_counts():
    G39 = gr.MetacyclicGroup(13, 3, 9, name="G39")
    assert len(verified_catalog(G39)) == 3  # 1 + l + m with m = l = 1
    D14 = gr.MetacyclicGroup(7, 2, 6, name="D14-generic")
    assert len(sh.ssp_generic_split(D14)) == 3
    G = gr.MetacyclicGroup(49, 2, 48, name="49:2")
    assert len(sh.ssp_generic_split(G)) == 1 + 1 + 2
    with pytest.raises(sh.NotGenericFamily):
        sh.ssp_generic_split(gr.ordinary_metacyclic(3, 3))  # same prime twice


def test_2group_counts():
    for order, n in ((16, 3), (32, 4), (64, 5)):
        for G in (gr.dihedral(order), gr.quaternion(order), gr.semidihedral(order)):
            pairs = sh.ssp_2group(G)
            assert len(pairs) == 4 + (n - 1)
            for pair in pairs:
                ok, why = sh.verify_ssp(G, pair)
                assert ok, (G.name, pair.label(), why)


def test_ordinary_metacyclic_2_counts():
    G = gr.ordinary_metacyclic(2, 4)  # n = 3
    pairs = verified_catalog(G)
    assert len(pairs) == 7  # 4 + 2 + 1
    trivial_k = [p for p in pairs if p.H.order == G.N and p.K.order == 1]
    assert len(trivial_k) == 1  # (<a>, <1>) exactly once


def test_ordinary_metacyclic_p_counts():
    G27 = gr.ordinary_metacyclic(3, 3)
    pairs = verified_catalog(G27)
    assert len(pairs) == 2 + 3 * 1 + 1
    # (<a>, <a^{p^n}>) degenerates to (<a>, 1)
    bottom = [p for p in pairs if p.H.order == 9]
    assert len(bottom) == 1 and bottom[0].K.order == 1
    G125 = gr.ordinary_metacyclic(5, 3)
    assert len(verified_catalog(G125)) == 2 + 5 + 1


def test_dihedral_any_counts():
    D14 = gr.dihedral(14)
    pairs = verified_catalog(D14)
    assert len(pairs) == 3  # n = 7 odd: (G,G), (G,<a>), (<a>,<a^7>)
    D12 = gr.dihedral(12)
    pairs = verified_catalog(D12)
    assert len(pairs) == 4 + 2  # v in {3, 6}


def test_quaternion_any_counts():
    Q20 = gr.quaternion(20)  # m = 5 odd
    pairs = verified_catalog(Q20)
    assert len(pairs) == 3 + 2  # {(G,G),(G,<a>),(G,<a^2>)} + v in {5, 10}
    Q16 = gr.quaternion(16)
    assert len(verified_catalog(Q16)) == 6


def test_p5_catalogs_verified_at_p3():
    sizes = {}
    for family in (1, 2, 3, 4):
        pairs = sh.ssp_p5(family, 3)
        G = pairs[0].group
        assert G.order == 243
        for pair in pairs:
            ok, why = sh.verify_ssp(G, pair, bound=300)
            assert ok, (family, pair.label(), why)
        sizes[family] = len(pairs)
    p = 3
    assert sizes[4] == 4 + 1 + 1 + 3 * (p - 1)
    # S(G3) contains the quoted (⟨a,b^p⟩, ⟨a^{p(p-1)} b^{p(pk+1)}⟩) family
    g3_pairs = sh.ssp_p5(3, 3)
    special = [pr for pr in g3_pairs if pr.params and dict(pr.params).get("kind") == 4]
    assert len(special) == p


def test_p5_bad_family():
    with pytest.raises(sh.BadFamilyIndex):
        sh.ssp_p5(5, 3)
    with pytest.raises(sh.BadFamilyIndex):
        sh.ssp_p5(1, 2)


def test_product_catalog():
    G1 = gr.MetacyclicGroup(13, 3, 9, name="G39")
    C5 = gr.cyclic(5)
    G = gr.direct_product(G1, C5)
    pairs = verified_catalog(G)
    assert len(pairs) == 3 * 2
    # trivial right factor leaves the catalog size unchanged
    Gt = gr.direct_product(G1, gr.cyclic(1))
    assert len(sh.ssp_catalog(Gt)) == 3


def test_product_table_shape_full_scale():
    G1 = gr.MetacyclicGroup(343, 3, pow(18, -1, 343), name="G1029")
    G2 = gr.MetacyclicGroup(11, 5, pow(4, -1, 11), name="G55")
    G = gr.direct_product(G1, G2)
    pairs = sh.ssp_catalog(G)
    assert len(pairs) == 5 * 3  # catalog sizes multiply


def test_c2q8_catalog():
    G = gr.c2_x_q8()
    pairs = verified_catalog(G)
    assert len(pairs) == 10


def test_verify_ssp_rejects():
    D8 = gr.dihedral(8)
    A = gr.subgroup_closure(D8, [D8.a])
    B = gr.subgroup_closure(D8, [D8.b])
    triv = gr.trivial_subgroup(D8)
    full = gr.full_subgroup(D8)
    ok, _ = sh.verify_ssp(D8, sh.ShodaPair(full, full, "test"))
    assert ok
    ok, _ = sh.verify_ssp(D8, sh.ShodaPair(A, triv, "test"))
    assert ok
    ok, why = sh.verify_ssp(D8, sh.ShodaPair(B, triv, "test"))
    assert not ok and "normal" in why
    with pytest.raises(sh.TooLarge):
        sh.verify_ssp(D8, sh.ShodaPair(A, triv, "test"), bound=4)
