import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from barfill.chains import (Chain, TupleBasis, basis_chain, boundary, chain_combine, chain_size,
                            enumerate_tuples, random_chain, zero_chain)
from barfill.errors import PreconditionError
from barfill.groups import build_group
from barfill.oracles import boundary_columns

Z2 = build_group("cyclic:2")
GROUPS = ["cyclic:2", "cyclic:3", "cyclic:5", "sym:3", "dihedral:8", "torus:2:4"]


def test_degree_one_boundary_vanishes():
    for g in range(Z2.order):
        assert boundary(basis_chain(Z2, (g,), 2)).is_zero()


def test_identity_cancellation():
    G = build_group("sym:3")
    for g in range(G.order):
        assert boundary(basis_chain(G, (g, G.identity), 3)) == basis_chain(G, (G.identity,), 3)


def test_z2_tt_boundary():
    assert boundary(basis_chain(Z2, (1, 1), 2)) == basis_chain(Z2, (0,), 2)


def test_sizes():
    G = build_group("cyclic:3")
    assert chain_size(zero_chain(G, 1, 3)) == 0
    assert chain_size(basis_chain(G, (1,), 3, coeff=2)) == 1
    assert chain_size(basis_chain(G, (1,), 3) + basis_chain(G, (2,), 3)) == 2


def test_combine_examples():
    G = build_group("cyclic:5")
    a = random_chain(G, 2, 5, 4, seed=1)
    b = random_chain(G, 2, 5, 3, seed=2)
    assert chain_combine(a, a, 4).is_zero()
    assert chain_combine(a, b, 0) == a
    g = basis_chain(Z2, (1,), 2)
    assert chain_combine(g, g, 1).is_zero()


def test_coefficients_reduced_and_nonzero():
    G = build_group("cyclic:3")
    c = Chain(G, 1, 3, [(4, (1,)), (3, (2,)), (-1, (0,))])
    assert dict(c.terms()) == {(0,): 2, (1,): 1}


def test_rejects_bad_terms():
    G = build_group("cyclic:3")
    with pytest.raises(PreconditionError):
        Chain(G, 2, 3, [(1, (0,))])
    with pytest.raises(PreconditionError):
        Chain(G, 1, 3, [(1, (7,))])
    with pytest.raises(PreconditionError):
        Chain(G, 1, 4, [(1, (0,))])


def test_enumeration():
    assert enumerate_tuples(Z2, 0).size == 1
    B = enumerate_tuples(Z2, 2)
    assert [B.tuple_at(i) for i in range(4)] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_tuples(build_group("sym:3"), 3).size == 216


def test_random_chain_contract():
    G = build_group("cyclic:3")
    assert random_chain(G, 2, 3, 0, seed=5).is_zero()
    assert len(random_chain(G, 2, 3, 9, seed=5)) == 9
    assert random_chain(G, 2, 3, 5, seed=9) == random_chain(G, 2, 3, 5, seed=9)


def test_json_format():
    G = build_group("sym:3")
    c = random_chain(G, 2, 3, 4, seed=3)
    data = json.loads(c.to_json())
    assert set(data) == {"group", "n", "l", "terms"}
    assert [t for _, t in data["terms"]] == sorted(t for _, t in data["terms"])
    assert Chain.from_json(c.to_json()) == c


def test_boundary_matches_column_oracle():
    G = build_group("cyclic:3")
    A = boundary_columns(G, 3, 3)
    B = TupleBasis(G, 3)
    for j in range(B.size):
        c = basis_chain(G, B.tuple_at(j), 3)
        assert np.array_equal(boundary(c).to_vector(), A[:, j] % 3)


chains = st.builds(
    lambda spec, n, l, size, seed: random_chain(build_group(spec), n, l,
                                                min(size, build_group(spec).order ** n), seed),
    st.sampled_from(GROUPS), st.integers(2, 4), st.sampled_from([2, 3, 5]),
    st.integers(0, 8), st.integers(0, 2**32))


@given(chains)
def test_dd_zero(c):
    assert boundary(boundary(c)).is_zero()


@given(st.sampled_from(GROUPS), st.integers(1, 3), st.sampled_from([2, 3, 5]),
       st.integers(0, 2**32), st.integers(0, 4))
def test_boundary_linear(spec, n, l, seed, s):
    G = build_group(spec)
    a = random_chain(G, n, l, min(5, G.order ** n), seed)
    b = random_chain(G, n, l, min(4, G.order ** n), seed + 1)
    assert boundary(a.combine(b, s)) == boundary(a).combine(boundary(b), s)


@given(chains)
def test_vector_round_trip(c):
    assert Chain.from_vector(c.group, c.n, c.l, c.to_vector()) == c
    assert Chain.from_dict(json.loads(c.to_json())) == c


@given(chains, st.integers(1, 4))
def test_scaling_preserves_size(c, s):
    if s % c.l:
        assert len(c.scale(s)) == len(c)
