import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from barfill.config import RunConfig
from barfill.errors import CapExceeded, SpecError
from barfill.field import FiniteField
from barfill.groups import (abelian_invariants, abelianization, automorphism_permutations,
                            build_group, commutator_length, commutator_set, cyclic_group,
                            derived_subgroup, diagonal_elements, direct_product, parse_spec,
                            subgroup_embedding)

SPECS = ["cyclic:1", "cyclic:6", "sym:3", "sym:4", "dihedral:8", "gl:2:2", "gl:2:3", "sl:2:3",
         "gl:2:4", "torus:2:4", "torus:1:7", "product:cyclic:2,sym:3"]


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def test_build_examples():
    Z6 = build_group("cyclic:6")
    assert (Z6.order, Z6.identity) == (6, 0)
    S3 = build_group("sym:3")
    assert S3.order == 6 and not S3.is_abelian()
    assert build_group("gl:2:3").order == 48


def test_gl23_order_by_enumeration():
    # brute force: invertible 2x2 matrices over GF(3)
    count = sum(1 for a, b, c, d in itertools.product(range(3), repeat=4) if (a * d - b * c) % 3)
    assert count == 48 == build_group("gl:2:3").order


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2)])
def test_closed_form_orders(n, q):
    assert build_group(f"gl:{n}:{q}").order == gl_order(n, q)
    assert build_group(f"sl:{n}:{q}").order == gl_order(n, q) // (q - 1)


@pytest.mark.parametrize("r,q", [(1, 4), (2, 4), (2, 5), (3, 3)])
def test_torus_order(r, q):
    assert build_group(f"torus:{r}:{q}").order == (q - 1) ** r


def test_dihedral_order_is_the_spec_number():
    assert build_group("dihedral:8").order == 8


@pytest.mark.parametrize("spec", SPECS)
def test_group_axioms(spec):
    G = build_group(spec)
    g = np.arange(G.order)
    assert np.array_equal(G.mul_array(G.identity, g), g)
    assert np.array_equal(G.mul_array(g, G.identity), g)
    assert np.all(G.mul_array(g, G.inverse[g]) == G.identity)
    assert np.array_equal(G.inverse[G.inverse], g)
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, G.order, size=(3, 1000))
    assert np.array_equal(G.mul_array(G.mul_array(a, b), c), G.mul_array(a, G.mul_array(b, c)))


@pytest.mark.parametrize("bad", ["", "cyclic", "cyclic:0", "cyclic:x", "sym:0", "dihedral:7",
                                 "gl:2:6", "gl:0:3", "torus:2", "product:cyclic:2", "foo:3",
                                 "cyclic:3 extra", "product:cyclic:2,"])
def test_parse_rejects(bad):
    with pytest.raises(SpecError):
        build_group(bad)


def test_parse_round_trip():
    assert str(parse_spec("product:cyclic:2,product:sym:3,gl:2:3")) == \
        "product:cyclic:2,product:sym:3,gl:2:3"


def test_order_cap():
    with pytest.raises(CapExceeded):
        build_group("gl:3:5", RunConfig(max_group_order=20000))


def test_direct_products():
    P = direct_product(build_group("cyclic:2"), build_group("cyclic:3"))
    assert P.order == 6 and P.is_abelian()
    V = direct_product(build_group("cyclic:2"), build_group("cyclic:2"))
    orders = V.element_orders()
    assert V.order == 4 and sorted(orders.tolist()) == [1, 2, 2, 2]
    S3 = build_group("sym:3")
    C = direct_product(S3, build_group("cyclic:1"))
    assert C.order == 6 and np.array_equal(C.table, S3.table)


def _bfs_closure(G, gens):
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.mark.parametrize("spec,order", [("cyclic:5", 1), ("sym:3", 3), ("sym:4", 12),
                                        ("gl:2:3", 24), ("dihedral:8", 2)])
def test_derived_subgroup_vs_bfs(spec, order):
    G = build_group(spec)
    D = derived_subgroup(G)
    assert len(D) == order
    assert D == _bfs_closure(G, [int(x) for x in commutator_set(G)])
    for g in range(G.order):  # normal
        assert {G.mul(G.mul(g, x), G.inv(g)) for x in D} == D


def test_commutator_length():
    S3 = build_group("sym:3")
    D = derived_subgroup(S3)
    assert commutator_length(S3, S3.identity) == 0
    for g in range(S3.order):
        if g in D and g != S3.identity:
            assert commutator_length(S3, g) == 1
        elif g not in D:
            assert commutator_length(S3, g) is None
    G = build_group("gl:2:3")
    comms = set(commutator_set(G).tolist()) - {G.identity}
    for g in comms:
        assert commutator_length(G, g) == 1


@pytest.mark.parametrize("spec,order", [("cyclic:6", 6), ("sym:3", 2), ("gl:2:3", 2),
                                        ("sym:4", 2), ("dihedral:8", 4)])
def test_abelianization(spec, order):
    G = build_group(spec)
    A, proj = abelianization(G)
    assert A.order == order and A.is_abelian()
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, G.order, size=(2, 200))
    assert np.array_equal(proj[G.mul_array(a, b)], A.mul_array(proj[a], proj[b]))


def test_abelian_invariants():
    assert abelian_invariants(build_group("cyclic:12")) == [12]
    assert sorted(abelian_invariants(build_group("torus:2:4"))) == [3, 3]
    assert abelian_invariants(abelianization(build_group("dihedral:8"))[0]) == [2, 2]


def test_subgroup_embedding():
    G = build_group("gl:2:3")
    T, elems = subgroup_embedding(G, diagonal_elements(G))
    assert T.order == 4
    whole, inc = subgroup_embedding(G, range(G.order))
    assert whole.order == G.order and sorted(inc.tolist()) == list(range(G.order))
    triv, _ = subgroup_embedding(G, [G.identity])
    assert triv.order == 1
    a, b = np.meshgrid(np.arange(T.order), np.arange(T.order))
    assert np.array_equal(elems[T.mul_array(a, b)], G.mul_array(elems[a], elems[b]))


@pytest.mark.parametrize("spec", ["cyclic:12", "sym:3", "dihedral:8", "torus:2:4"])
def test_automorphisms_are_homomorphic_and_closed(spec):
    G = build_group(spec)
    P = automorphism_permutations(G)
    a, b = np.meshgrid(np.arange(G.order), np.arange(G.order))
    rows = {tuple(p) for p in P.tolist()}
    for p in P:
        assert sorted(p.tolist()) == list(range(G.order))
        assert np.array_equal(p[G.mul_array(a, b)], G.mul_array(p[a], p[b]))
        for q in P:
            assert tuple(p[q].tolist()) in rows


def test_cyclic_group_matches_addition():
    Z = cyclic_group(7)
    assert Z.mul(3, 5) == 1 and Z.inv(3) == 4


@given(st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 1), (7, 1), (2, 4)]), st.data())
def test_field_axioms(pe, data):
    F = FiniteField(*pe)
    q = F.q
    x = data.draw(st.integers(1, q - 1))
    y = data.draw(st.integers(0, q - 1))
    z = data.draw(st.integers(0, q - 1))
    assert F.mul(x, F.inv(x)) == 1
    assert F.pow(x, q - 1) == 1
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(y, z) == F.mul(z, y)
