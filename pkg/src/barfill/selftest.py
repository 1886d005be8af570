"""Invariant and oracle suites behind the ``selftest`` subcommand.

Each suite is a function ``(seed) -> dict`` returning only deterministic,
JSON-serialisable data (no timings), with a boolean ``passed``.
"""

from __future__ import annotations

import json
import zlib

import numpy as np

from .chains import Chain, TupleBasis, boundary, random_chain
from .config import DEFAULT, RunConfig
from .errors import CapExceeded
from .family import (GroupFamily, coordinate_decompose, cyclic_embedding, diagonal_embed,
                     image_order, reconstruct)
from .groups import build_group, direct_product
from .homology import diagonal_torus, homology, index_prime_to_l, induced_map
from .isoperimetry import (census_size, check_phi, check_psi, filler_distance, filler_norm,
                           isop, isop_profile)
from .oracles import h1_dim_from_abelianization, isop_bruteforce, kunneth_dim, min_fill_table

REGISTRY = [f"cyclic:{m}" for m in range(2, 13)] + [
    "sym:3", "sym:4", "dihedral:8", "gl:2:3", "torus:2:4"]


def _rng(seed: int, tag: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(tag.encode())])


# 1 ---------------------------------------------------------------------------

def suite_dd(seed: int = 0, count: int = 10_000) -> dict:
    """d o d = 0 on random chains of degree 2..4 (compositions d_1 d_2, d_2 d_3, d_3 d_4)."""
    rng = _rng(seed, "dd")
    groups = [build_group(s) for s in REGISTRY]
    failures, per_degree = [], {2: 0, 3: 0, 4: 0}
    for k in range(count):
        G = groups[k % len(groups)]
        n = int(rng.integers(2, 5))
        l = int(rng.choice([2, 3, 5]))
        size = int(rng.integers(1, 9))
        c = random_chain(G, n, l, min(size, G.order ** n), int(rng.integers(2**62)))
        per_degree[n] += 1
        if not boundary(boundary(c)).is_zero():
            failures.append(c.to_dict())
    return {"suite": "dd", "criterion": 1, "chains": count, "per_degree": per_degree,
            "failures": failures[:5], "failure_count": len(failures),
            "passed": not failures}


# 2 ---------------------------------------------------------------------------

def suite_homology(seed: int = 0) -> dict:
    cyclic = []
    for l in (2, 3):
        Z = build_group(f"cyclic:{l}")
        cyclic.append({"l": l, "dims": [homology(Z, n, l).dim for n in range(4)]})
    h1 = []
    for spec in REGISTRY:
        G = build_group(spec)
        for l in (2, 3, 5):
            h1.append({"group": spec, "l": l, "pipeline": homology(G, 1, l).dim,
                       "oracle": h1_dim_from_abelianization(G, l)})
    C2 = build_group("cyclic:2")
    P = direct_product(C2, C2)
    single = [homology(C2, n, 2).dim for n in range(3)]
    kun = [{"n": n, "product": homology(P, n, 2).dim,
            "kunneth": kunneth_dim(single, single, n)} for n in (1, 2)]
    ok = (all(r["dims"] == [1, 1, 1, 1] for r in cyclic)
          and all(r["pipeline"] == r["oracle"] for r in h1)
          and all(r["product"] == r["kunneth"] for r in kun)
          and [r["product"] for r in kun] == [2, 3])
    return {"suite": "homology", "criterion": 2, "cyclic": cyclic, "h1": h1, "kunneth": kun,
            "passed": ok}


# 3 ---------------------------------------------------------------------------

FILLER_CONFIGS = [(f"cyclic:{m}", n, l) for m in (2, 3, 4) for n in (1, 2) for l in (2, 3)]


def suite_filler_oracle(seed: int = 0, per_config: int | None = None) -> dict:
    """Branch-and-bound filler norm vs enumeration over all chains of size <= 3.

    Every boundary d(c), |c| <= 3, is checked unless ``per_config`` asks for
    a seeded subsample.
    """
    rows, mismatches = [], []
    for spec, n, l in FILLER_CONFIGS:
        G = build_group(spec)
        table = min_fill_table(G, n, l, 3)
        keys = sorted(table)
        if per_config is not None and len(keys) > per_config:
            pick = _rng(seed, f"fill:{spec}:{n}:{l}").choice(len(keys), per_config, replace=False)
            keys = [keys[i] for i in sorted(pick)]
        basis = TupleBasis(G, n)
        agree = 0
        for key in keys:
            v = np.frombuffer(key, dtype=np.int64)
            nz = np.flatnonzero(v)
            b = Chain(G, n, l, {basis.tuple_at(int(i)): int(v[i]) for i in nz})
            res = filler_norm(b)
            ok = res.exact and res.filler_size == table[key] and boundary(res.witness) == b
            agree += ok
            if not ok:
                mismatches.append({"chain": b.to_dict(), "solver": res.filler_size,
                                   "oracle": table[key]})
        rows.append({"group": spec, "n": n, "l": l, "boundaries": len(table),
                     "checked": len(keys), "agree": agree})
    total = sum(r["checked"] for r in rows)
    return {"suite": "filler_oracle", "criterion": 3, "configs": rows, "instances": total,
            "mismatches": mismatches[:5], "passed": not mismatches and total >= 500}


# 4 ---------------------------------------------------------------------------

def suite_isop_micro(seed: int = 0) -> dict:
    G = build_group("cyclic:2")
    vals = {K: isop(G, 1, 2, K).value for K in (1, 2)}
    oracle = {K: isop_bruteforce(G, 1, 2, K) for K in (1, 2)}
    return {"suite": "isop_micro", "criterion": 4, "isop": vals, "oracle": oracle,
            "passed": vals == {1: 1, 2: 0} and oracle == vals}


# 5 ---------------------------------------------------------------------------

PSI_CONFIG = RunConfig(max_census=60_000)


def suite_sentences(seed: int = 0) -> dict:
    G = build_group("cyclic:2")
    prof = isop_profile(G, 1, 2, 2)
    K1 = prof.k1(1)
    phi_true = check_phi(G, 1, 2, 1, K1, 1).holds
    phi_false = check_phi(G, 1, 2, 1, 1, 0).holds
    psi, skipped, counter = [], [], []
    for spec in REGISTRY:
        H = build_group(spec)
        for l in (2, 3):
            for K in (1, 2):
                try:
                    if census_size(H, 1, l, 2 * K) > PSI_CONFIG.max_census:
                        raise CapExceeded("isop census too large")
                    k1 = isop_profile(H, 1, l, 2 * K, config=PSI_CONFIG).k1(K)
                    dim = homology(H, 1, l).dim
                    res = check_psi(H, 1, l, K, k1, dim, PSI_CONFIG)
                except CapExceeded:
                    skipped.append({"group": spec, "l": l, "K": K})
                    continue
                psi.append({"group": spec, "l": l, "K": K, "K1": k1, "H_bound": dim,
                            "classes": res.classes, "cycles": res.cycles, "holds": res.holds})
                if not res.holds:
                    counter.append(psi[-1])
    return {"suite": "sentences", "criterion": 5, "K1": K1, "phi_1_K1_1": phi_true,
            "phi_1_1_0": phi_false, "psi": psi, "psi_skipped": skipped,
            "passed": phi_true and not phi_false and not counter and bool(psi)}


# 6 ---------------------------------------------------------------------------

TORUS_CASES = [(3, 2), (4, 3), (5, 2), (5, 3)]    # gl:2:q with l != char


def suite_torus(seed: int = 0) -> dict:
    rows = []
    for q, l in TORUS_CASES:
        G = build_group(f"gl:2:{q}")
        inc = diagonal_torus(G)
        idx = index_prime_to_l(G, inc[0], l)
        m = induced_map(inc, 1, l)
        rows.append({"group": G.key, "l": l, "index": idx.index, "prime_to_l": idx.prime_to_l,
                     "dim_torus": m.source.dim, "dim_group": m.target.dim,
                     "surjective": m.surjective,
                     "consistent": (not idx.prime_to_l) or m.surjective})
    return {"suite": "torus", "criterion": 6, "cases": rows,
            "passed": all(r["consistent"] for r in rows)}


# 7 ---------------------------------------------------------------------------

METRIC_GROUPS = [("cyclic:3", 3), ("cyclic:4", 2), ("sym:3", 2), ("cyclic:5", 5), ("dihedral:8", 2)]


def suite_metric(seed: int = 0, count: int = 200) -> dict:
    rng = _rng(seed, "metric")
    tri = sub = 0
    violations, attempts = [], 0
    while (tri < count or sub < count) and attempts < 20 * count:
        attempts += 1
        spec, l = METRIC_GROUPS[attempts % len(METRIC_GROUPS)]
        G = build_group(spec)
        s = lambda: int(rng.integers(2**62))
        if tri < count:
            z1 = random_chain(G, 1, l, int(rng.integers(0, 4)), s())
            z2 = z1 + boundary(random_chain(G, 2, l, int(rng.integers(1, 3)), s()))
            z3 = z1 + boundary(random_chain(G, 2, l, int(rng.integers(1, 3)), s()))
            d12, d23, d13 = (filler_distance(a, b) for a, b in ((z1, z2), (z2, z3), (z1, z3)))
            if d12.exact and d23.exact and d13.exact:
                tri += 1
                if d13.filler_size > d12.filler_size + d23.filler_size:
                    violations.append({"kind": "triangle", "z": [z.to_dict() for z in (z1, z2, z3)]})
        if sub < count:
            b1 = boundary(random_chain(G, 2, l, int(rng.integers(1, 4)), s()))
            b2 = boundary(random_chain(G, 2, l, int(rng.integers(1, 4)), s()))
            f1, f2, f12 = filler_norm(b1), filler_norm(b2), filler_norm(b1 + b2)
            if f1.exact and f2.exact and f12.exact:
                sub += 1
                if f12.filler_size > f1.filler_size + f2.filler_size:
                    violations.append({"kind": "subadditivity", "b": [b1.to_dict(), b2.to_dict()]})
    return {"suite": "metric", "criterion": 7, "triangle": tri, "subadditivity": sub,
            "violations": violations[:5], "violation_count": len(violations),
            "passed": not violations and tri >= count and sub >= count}


# 8 ---------------------------------------------------------------------------

def suite_family(seed: int = 0, count: int = 100) -> dict:
    rng = _rng(seed, "family")
    fam = GroupFamily.over_prime_powers("torus:1", [4, 7, 13, 16, 19], 2, 3, mod_filter=True)
    groups = fam.groups()
    embs = [cyclic_embedding(3, G) for G in groups]
    B = build_group("cyclic:3")
    ok = 0
    failures = []
    for _ in range(count):
        c = random_chain(B, 2, 3, int(rng.integers(0, 6)), int(rng.integers(2**62)))
        images = diagonal_embed(c, groups, embs)
        dec = coordinate_decompose(images, 6, [image_order(c, e) for e in embs])
        back = reconstruct(dec, B, embs, 2, 3)
        good = (dec.t0 == c.coefficients() and len(dec.members) == len(groups)
                and all(v == c for v in back.values()))
        ok += good
        if not good:
            failures.append(c.to_dict())
    return {"suite": "family", "criterion": 8, "members": fam.labels, "chains": count,
            "round_trips": ok, "failures": failures[:5], "passed": ok == count}


# 9 ---------------------------------------------------------------------------

def suite_determinism(seed: int = 0) -> dict:
    runs = []
    for _ in range(2):
        runs.append(dumps([suite_isop_micro(seed), suite_family(seed, 20),
                           suite_metric(seed, 20), suite_dd(seed, 500)]))
    return {"suite": "determinism", "criterion": 9, "bytes": len(runs[0]),
            "identical": runs[0] == runs[1], "passed": runs[0] == runs[1]}


SUITES = {
    "dd": suite_dd,
    "homology": suite_homology,
    "filler_oracle": suite_filler_oracle,
    "isop_micro": suite_isop_micro,
    "sentences": suite_sentences,
    "torus": suite_torus,
    "metric": suite_metric,
    "family": suite_family,
    "determinism": suite_determinism,
}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def run(names=None, seed: int = 0) -> list[dict]:
    return [SUITES[name](seed) for name in (names or SUITES)]
