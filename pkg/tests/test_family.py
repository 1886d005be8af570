import numpy as np
import pytest
from hypothesis import given, strategies as st

from barfill.chains import Chain, basis_chain, boundary, random_chain, zero_chain
from barfill.errors import PreconditionError, SpecError
from barfill.family import (GroupFamily, asymp_probe, check_star, coordinate_decompose,
                            cyclic_embedding, diagonal_embed, image_order, parse_recipe,
                            reconstruct)
from barfill.groups import build_group
from barfill.isoperimetry import filler_distance

Z3 = build_group("cyclic:3")
TORUS = GroupFamily.over_prime_powers("torus:1", [4, 7, 13, 16, 19], 2, 3, mod_filter=True)


def test_over_prime_powers_filters():
    fam = GroupFamily.over_prime_powers("gl:2", range(2, 20), 1, 3, mod_filter=True)
    assert fam.labels == ["4", "7", "13", "16", "19"]
    assert GroupFamily.over_prime_powers("gl:2", [6, 10, 12], 1, 2).labels == []
    with pytest.raises(PreconditionError):
        GroupFamily([("a", "cyclic:2"), ("a", "cyclic:3")], 1, 2)
    with pytest.raises(SpecError):
        GroupFamily([("a", "cyclic:x")], 1, 2)


def test_identity_family_is_constant():
    S3 = build_group("sym:3")
    c = random_chain(S3, 2, 3, 4, seed=2)
    ident = np.arange(S3.order)
    imgs = diagonal_embed(c, [S3] * 3, [ident] * 3)
    assert all(x == c for x in imgs)
    assert all(x.is_zero() for x in diagonal_embed(zero_chain(S3, 2, 3), [S3] * 2, [ident] * 2))


def test_torus_embedding_preserves_size():
    groups = TORUS.groups()
    embs = [cyclic_embedding(3, G) for G in groups]
    g = basis_chain(Z3, (1,), 3)
    assert [len(x) for x in diagonal_embed(g, groups, embs)] == [1] * len(groups)


def test_non_homomorphism_rejected():
    G = build_group("torus:1:7")
    bad = np.array([0, 1, 1])
    with pytest.raises(PreconditionError):
        diagonal_embed(basis_chain(Z3, (1,), 3), [G], [bad])
    with pytest.raises(PreconditionError):
        cyclic_embedding(5, G)


def test_decompose_examples():
    c = basis_chain(Z3, (1,), 3) + basis_chain(Z3, (2,), 3, 2)
    d = coordinate_decompose([c, c, c], 2)
    assert d.members == [0, 1, 2] and d.dissent == [] and d.t0 == (1, 2)
    other = c.scale(2)
    d = coordinate_decompose([c, other, c, c], 2)
    assert d.dissent == [1] and d.t0 == (1, 2)
    with pytest.raises(PreconditionError):
        coordinate_decompose([c], 1)
    d = coordinate_decompose([c, other], 2)  # tie: lexicographically smallest pattern
    assert d.t0 == (1, 2)


@given(st.integers(0, 6), st.integers(0, 2**32))
def test_round_trip(size, seed):
    groups = TORUS.groups()
    embs = [cyclic_embedding(3, G) for G in groups]
    c = random_chain(Z3, 2, 3, size, seed)
    images = diagonal_embed(c, groups, embs)
    d = coordinate_decompose(images, 9, [image_order(c, e) for e in embs])
    assert d.t0 == c.coefficients() and len(d.members) == len(groups)
    assert all(v == c for v in reconstruct(d, Z3, embs, 2, 3).values())


@given(st.integers(1, 5), st.integers(0, 2**32))
def test_embedding_commutes_with_boundary(size, seed):
    groups = TORUS.groups()
    embs = [cyclic_embedding(3, G) for G in groups]
    c = random_chain(Z3, 2, 3, size, seed)
    lhs = [boundary(x) for x in diagonal_embed(c, groups, embs)]
    rhs = diagonal_embed(boundary(c), groups, embs)
    assert lhs == rhs


def test_check_star_examples():
    Z2 = build_group("cyclic:2")
    fam = GroupFamily([(str(i), "cyclic:2") for i in range(4)], 1, 2)
    e = basis_chain(Z2, (0,), 2)
    rep = check_star(fam, [e] * 4)
    assert rep.star_verdict == "bounded" and rep.max_filler == 1
    for r, b in zip(rep.results, [e] * 4):
        assert boundary(r.witness) == b
    rep = check_star(fam, [zero_chain(Z2, 1, 2)] * 4)
    assert rep.star_verdict == "bounded" and rep.max_filler == 0
    one = check_star(GroupFamily([("x", "cyclic:2")], 1, 2), [e])
    assert len(one.results) == 1
    with pytest.raises(PreconditionError):
        check_star(fam, [basis_chain(Z2, (1,), 2)] * 4)


def test_check_star_order_free():
    fam = GroupFamily.over_prime_powers("torus:1", [4, 7, 13], 1, 3, mod_filter=True)
    groups = fam.groups()
    bs = [boundary(basis_chain(G, (1, 2), 3)) for G in groups]
    a = check_star(fam, bs)
    rev = GroupFamily(fam.members[::-1], 1, 3)
    b = check_star(rev, bs[::-1])
    assert (a.star_verdict, a.max_filler) == (b.star_verdict, b.max_filler)


def test_probe_fixed_chain_bound():
    fam = GroupFamily.over_prime_powers("torus:1", [4, 7, 13, 16], 1, 3, mod_filter=True)
    rep = asymp_probe(fam, "d([r0,t0] + 2*[t0^2,r0])", K=4)
    assert rep.star_verdict == "bounded"
    assert all(r.filler_size <= 2 for r in rep.results)


def test_probe_distance_recipe():
    # t and t^4 differ by a cube, so <t> and <t^4> are homologous mod 3
    fam = GroupFamily.over_prime_powers("torus:1", [4, 7, 13], 1, 3, mod_filter=True)
    rep = asymp_probe(fam, "[t0] - [t0^4]", K=2)
    assert rep.star_verdict == "bounded"
    for G, r in zip(fam.groups(), rep.results):
        rec = parse_recipe("[t0]"), parse_recipe("[t0^4]")
        z1, z2 = (x.evaluate(G, 3) for x in rec)
        assert r.filler_size == filler_distance(z1, z2).filler_size


def test_probe_failures_and_empty():
    fam = GroupFamily.over_prime_powers("torus:1", [4, 5], 1, 3)
    rep = asymp_probe(fam, "[r0]")   # r0 needs a cube root of unity: missing at q=5
    assert rep.star_verdict == "mixed" and set(rep.failures) == {"4", "5"}
    empty = asymp_probe(GroupFamily([], 1, 2), "[e]")
    assert empty.table() == [] and empty.star_verdict == "bounded" and empty.max_filler == 0
    with pytest.raises(SpecError):
        parse_recipe("[t0")


def test_csv_table():
    fam = GroupFamily.over_prime_powers("torus:1", [4, 7], 1, 3, mod_filter=True)
    csv = asymp_probe(fam, "d([r0,r0])").to_csv()
    assert csv.splitlines() == ["q,group_order,filler,exact", "4,3,1,true", "7,6,1,true"]


def test_growth_flag():
    from barfill.family import FamilyReport
    from barfill.isoperimetry import FillerResult
    Z2 = build_group("cyclic:2")
    mk = lambda s: FillerResult(zero_chain(Z2, 1, 2), s, zero_chain(Z2, 2, 2), True, 0, 0)
    assert FamilyReport(["a", "b", "c"], [1, 1, 1], [mk(1), mk(2), mk(3)]).growth_suspected
    assert not FamilyReport(["a", "b", "c"], [1, 1, 1], [mk(1), mk(2), mk(2)]).growth_suspected
