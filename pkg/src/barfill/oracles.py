"""Brute-force reference computations, independent of the elimination and search code.

Everything here enumerates: boundaries come from the chain-level formula
applied tuple by tuple, spans and fillers from exhaustive enumeration of
coefficient vectors or small supports, and H_1 from the abelianization.
Only tiny instances are feasible, which is the point.
"""

from __future__ import annotations

import itertools

import numpy as np

from .chains import TupleBasis, basis_chain, boundary
from .groups import FiniteGroup, abelian_invariants, abelianization


def boundary_columns(G: FiniteGroup, n: int, l: int) -> np.ndarray:
    """Dense matrix of d_n built one basis tuple at a time from the chain formula."""
    src, dst = TupleBasis(G, n), TupleBasis(G, n - 1)
    A = np.zeros((dst.size, src.size), dtype=np.int64)
    for j in range(src.size):
        for t, c in boundary(basis_chain(G, src.tuple_at(j), l)).terms():
            A[dst.index(t), j] = c
    return A


def min_fill_table(G: FiniteGroup, n: int, l: int, max_size: int = 3) -> dict[bytes, int]:
    """Map each boundary reachable as d(c), |c| <= max_size, to its least filler size.

    Keys are the boundary coordinate vectors (int64 bytes).
    """
    A = boundary_columns(G, n + 1, l)
    rows, cols = A.shape
    table: dict[bytes, int] = {np.zeros(rows, dtype=np.int64).tobytes(): 0}
    for k in range(1, max_size + 1):
        pats = np.array(list(itertools.product(range(1, l), repeat=k)), dtype=np.int64)
        for S in itertools.combinations(range(cols), k):
            imgs = (pats @ A[:, list(S)].T) % l
            for v in imgs:
                table.setdefault(v.tobytes(), k)
    return table


def all_boundaries(G: FiniteGroup, n: int, l: int, limit: int = 1 << 16) -> set[bytes]:
    """B_n as the set of D_{n+1} x over every coefficient vector x (tiny cases only)."""
    A = boundary_columns(G, n + 1, l)
    cols = A.shape[1]
    if l ** cols > limit:
        raise ValueError(f"{l}^{cols} coefficient vectors exceed the enumeration limit")
    out = set()
    for x in itertools.product(range(l), repeat=cols):
        out.add(((A @ np.array(x, dtype=np.int64)) % l).tobytes())
    return out


def isop_bruteforce(G: FiniteGroup, n: int, l: int, K: int) -> int:
    """isop(K) from the enumerated boundary set and the enumerated filler table."""
    B = all_boundaries(G, n, l)
    fills = min_fill_table(G, n, l, max_size=G.order ** (n + 1))
    N = G.order ** n
    best = 0
    for S in itertools.combinations(range(N), K):
        for pat in itertools.product(range(1, l), repeat=K):
            v = np.zeros(N, dtype=np.int64)
            v[list(S)] = pat
            key = v.tobytes()
            if key in B:
                best = max(best, fills[key])
    return best


def h1_dim_from_abelianization(G: FiniteGroup, l: int) -> int:
    """dim H_1(G; Z/l) = number of invariant factors of G^ab divisible by l."""
    A, _ = abelianization(G)
    return sum(1 for d in abelian_invariants(A) if d % l == 0)


def kunneth_dim(dims_g: list[int], dims_h: list[int], n: int) -> int:
    return sum(dims_g[i] * dims_h[n - i] for i in range(n + 1))
