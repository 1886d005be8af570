import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from barfill.chains import TupleBasis, basis_chain, boundary, random_chain, zero_chain
from barfill.config import RunConfig
from barfill.errors import CapExceeded, PreconditionError
from barfill.groups import build_group
from barfill.isoperimetry import (_filling, _iter_boundaries, check_phi, check_psi,
                                  commutator_report, filler_distance, filler_norm,
                                  has_filler_of_size, isop, isop_profile)
from barfill.oracles import isop_bruteforce, min_fill_table

Z2 = build_group("cyclic:2")
e, t = (0,), (1,)


def test_filler_norm_examples():
    r = filler_norm(zero_chain(Z2, 1, 2))
    assert r.filler_size == 0 and r.witness.is_zero() and r.exact
    r = filler_norm(basis_chain(Z2, e, 2))
    assert r.filler_size == 1 and len(r.witness) == 1 and r.exact
    assert boundary(r.witness) == basis_chain(Z2, e, 2)


def test_filler_norm_rejects_non_boundary():
    with pytest.raises(PreconditionError):
        filler_norm(basis_chain(Z2, t, 2))


def test_filler_distance_examples():
    z = basis_chain(Z2, t, 2)
    assert filler_distance(z, z).filler_size == 0
    assert filler_distance(z, z + basis_chain(Z2, e, 2)).filler_size == 1
    with pytest.raises(PreconditionError):
        filler_distance(z, zero_chain(Z2, 1, 2))


def test_isop_examples():
    assert isop(Z2, 1, 2, 1).value == 1
    assert isop(Z2, 1, 2, 2).value == 0
    for spec in ("cyclic:3", "sym:3"):
        assert isop(build_group(spec), 1, 3, 0).value == 0
    assert isop_profile(Z2, 1, 2, 0).values == [0]
    p = isop_profile(Z2, 1, 2, 2)
    assert p.values == [0, 1, 0] and p.k1(1) == 1


@pytest.mark.parametrize("spec,n,l,K", [("cyclic:2", 1, 2, 1), ("cyclic:2", 1, 2, 2),
                                        ("cyclic:3", 1, 3, 1), ("cyclic:3", 1, 3, 2),
                                        ("cyclic:4", 1, 2, 2)])
def test_isop_vs_bruteforce(spec, n, l, K):
    G = build_group(spec)
    assert isop(G, n, l, K).value == isop_bruteforce(G, n, l, K)


@pytest.mark.parametrize("spec,l,K", [("cyclic:6", 3, 3), ("sym:3", 2, 3), ("sym:3", 3, 2),
                                      ("dihedral:8", 2, 3), ("torus:2:4", 3, 2),
                                      ("cyclic:5", 5, 2)])
def test_orbit_reduction_matches_full_scan(spec, l, K):
    G = build_group(spec)
    r = isop(G, 1, l, K)
    ctx = _filling(G, 1, l, RunConfig())
    best = count = 0
    for _, bs in _iter_boundaries(G, 1, l, K, RunConfig()):
        for b in bs:
            count += l - 1
            best = max(best, ctx.fill(b, RunConfig())[0])
    assert (r.value, r.boundaries) == (best, count)


def test_isop_sampled_is_lower_bound():
    G = build_group("cyclic:3")
    r = isop(G, 1, 3, 2, mode="sampled", sample_count=200, seed=1)
    assert r.lower_bound and r.value <= isop(G, 1, 3, 2).value
    assert isop_profile(G, 1, 3, 2, mode="sampled", sample_count=50).results[1].lower_bound


def test_isop_cap_and_bad_input():
    with pytest.raises(CapExceeded):
        isop(build_group("sym:4"), 1, 3, 6)
    with pytest.raises(PreconditionError):
        isop(Z2, 1, 2, -1)
    with pytest.raises(PreconditionError):
        isop(Z2, 1, 2, 1, mode="sampled")


def test_isop_checkpoint_resume(tmp_path):
    G = build_group("cyclic:6")
    cfg = RunConfig(checkpoint=str(tmp_path / "ck.json"), checkpoint_every=5)
    first = isop(G, 1, 3, 3, config=cfg)
    saved = json.loads((tmp_path / "ck.json").read_text())
    assert saved["index"] > 0 and saved["value"] == first.value
    again = isop(G, 1, 3, 3, config=cfg)  # resumes from the final index
    assert (again.value, again.boundaries) == (first.value, first.boundaries)
    assert first.value == isop(G, 1, 3, 3).value


def test_isop_threads_agree():
    G = build_group("cyclic:7")
    a = isop(G, 1, 3, 3)
    b = isop(G, 1, 3, 3, config=RunConfig(threads=2))
    assert (a.value, a.boundaries) == (b.value, b.boundaries)


def test_phi_examples():
    assert check_phi(Z2, 1, 2, 1, 1, 1).holds
    assert check_phi(Z2, 1, 2, 1, 4, 1).holds
    assert not check_phi(Z2, 1, 2, 1, 1, 0).holds
    G = build_group("cyclic:3")
    v = isop(G, 1, 3, 2).value
    assert check_phi(G, 1, 3, 2, 2, v).holds


def test_has_filler_of_size():
    b = basis_chain(Z2, e, 2)
    assert has_filler_of_size(b, 1, Z2, 1, 2)
    assert not has_filler_of_size(b, 0, Z2, 1, 2)
    assert has_filler_of_size(b, 3, Z2, 1, 2)  # e.g. <t,t> + <e,e> + <t,e>


def test_psi_examples():
    assert check_psi(Z2, 1, 2, 1, 1, 1).holds
    r = check_psi(Z2, 1, 2, 1, 1, 0)
    assert not r.holds and len(r.witnesses) == 2
    G = build_group("cyclic:3")
    assert check_psi(G, 1, 3, 1, isop_profile(G, 1, 3, 2).k1(1), 1).holds


def test_commutator_report():
    rows = commutator_report(build_group("sym:3"), 3)
    assert len(rows) == 3
    for r in rows:
        assert r["filler_norm"] >= (r["commutator_length"] > 0)


@given(st.sampled_from([("cyclic:3", 2), ("cyclic:4", 3), ("sym:3", 2), ("dihedral:8", 2)]),
       st.integers(1, 3), st.integers(0, 2**32))
def test_witness_and_upper_bound(gl, size, seed):
    spec, l = gl
    G = build_group(spec)
    c = random_chain(G, 2, l, size, seed)
    b = boundary(c)
    r = filler_norm(b)
    assert boundary(r.witness) == b
    assert len(r.witness) == r.filler_size <= len(c)


@given(st.sampled_from([("cyclic:3", 3), ("cyclic:4", 2), ("sym:3", 3)]),
       st.integers(0, 2**32))
def test_subadditivity_and_scaling(gl, seed):
    spec, l = gl
    G = build_group(spec)
    b1 = boundary(random_chain(G, 2, l, 2, seed))
    b2 = boundary(random_chain(G, 2, l, 2, seed + 1))
    f1, f2, f12 = filler_norm(b1), filler_norm(b2), filler_norm(b1 + b2)
    assert f12.filler_size <= f1.filler_size + f2.filler_size
    for s in range(1, l):
        assert filler_norm(b1.scale(s)).filler_size == f1.filler_size


def test_filler_norm_vs_table_exhaustively_small():
    G = build_group("cyclic:3")
    table = min_fill_table(G, 1, 3, 3)
    basis = TupleBasis(G, 1)
    for key, size in table.items():
        v = np.frombuffer(key, dtype=np.int64)
        b = basis_chain(G, (0,), 3).scale(0)
        for i in np.flatnonzero(v):
            b = b + basis_chain(G, basis.tuple_at(int(i)), 3, int(v[i]))
        assert filler_norm(b).filler_size == size
