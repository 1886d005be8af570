"""Minimum-weight solutions of sparse linear systems over GF(l).

Given a sparse ``A`` and a target ``b`` in its column space, find ``x`` with
``A x = b`` and the fewest nonzero entries.  The search is iterative deepening
on the weight; at a fixed weight a depth-first branch-and-bound grows a
support set ``S`` one column at a time.

At each node the columns of ``S`` are kept as a reduced echelon basis (sparse
dict vectors, one pivot row each) and ``r`` is ``b`` reduced against it.  If
``r = 0`` the support suffices.  Otherwise some row ``i`` has ``r[i] != 0`` and
every completion must contain a column whose reduced image is nonzero at
``i``.  Branching over those candidates, where branch ``k`` forbids candidates
``1..k-1`` everywhere below it, partitions the remaining solution space, so no
support is visited twice.  The row with the fewest candidates is chosen.

Pruning: rows of ``b`` untouched by ``S`` can only be fixed by new columns,
each touching at most ``max column weight`` rows.

When the matrix is small enough, weights up to 4 are settled first by a
meet-in-the-middle lookup: every combination of at most two columns is
hashed once, and ``b`` has a solution of weight <= 4 iff ``b - v`` is in the
table for some table vector ``v``.  Hash hits are verified exactly.  When the
pair table is too large, a table of single columns settles weights up to 3
by peeling columns that meet a fixed nonzero row of the residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import BudgetExhausted
from .linalg import dense_solve

PAIR_TABLE_WORK = 2 * 10**7     # table entries x rows, bounds build and per-query cost


@dataclass
class SearchOutcome:
    x: dict[int, int] | None     # column -> nonzero coefficient
    weight: int
    exact: bool
    nodes: int


class MinWeightSolver:
    """Reusable solver for one matrix; targets vary per call."""

    def __init__(self, A, l: int):
        self.l = l
        csc = sp.csc_matrix(A, dtype=np.int64)
        csc.data %= l
        csc.eliminate_zeros()
        self.csc = csc
        self.csr = csc.tocsr()
        self.rows, self.cols = csc.shape
        lens = np.diff(csc.indptr)
        self.max_col = int(lens.max()) if len(lens) and lens.max() > 0 else 1
        self._col_cache: dict[int, dict[int, int]] = {}
        self.nodes = 0
        self._budget = 0
        self._table = None
        cols, q = self.cols, l - 1
        entries = 1 + cols * q + cols * (cols - 1) // 2 * q * q
        self.use_table = entries * max(self.rows, 1) <= PAIR_TABLE_WORK
        self._singles = None
        self.use_singles = (not self.use_table
                            and cols * q * max(self.rows, 1) <= PAIR_TABLE_WORK)

    # -- single-column lookups ---------------------------------------------------
    def _build_singles(self):
        l = self.l
        A = self.csc.toarray()
        self._weights = np.random.default_rng(0x5EED).integers(
            1, 2**63, size=self.rows, dtype=np.uint64) | np.uint64(1)
        J = np.repeat(np.arange(self.cols), l - 1)
        C = np.tile(np.arange(1, l), self.cols)
        H = self._hash(((A[:, J] * C) % l).T)
        order = np.argsort(H, kind="stable")
        self._singles = (A, H[order], J[order], C[order])

    def _single_hits(self, R: np.ndarray):
        """For each row of R, some (column, coefficient) whose multiple equals it, or None."""
        A, H, J, C = self._singles
        h = self._hash(R)
        lo = np.searchsorted(H, h, "left")
        hi = np.searchsorted(H, h, "right")
        out = []
        for k in range(len(R)):
            hit = None
            for p in range(lo[k], hi[k]):
                if np.array_equal(A[:, J[p]] * C[p] % self.l, R[k]):
                    hit = (int(J[p]), int(C[p]))
                    break
            out.append(hit)
        return out

    def _near_singles(self, r: np.ndarray):
        """Every multiple of a column meeting the nonzero row of r with fewest columns, and r minus it."""
        A = self._singles[0]
        nz = np.flatnonzero(r)
        lens = self.csr.indptr[nz + 1] - self.csr.indptr[nz]
        cols = np.asarray(self.adj(int(nz[np.argmin(lens)])), dtype=np.int64)
        J = np.repeat(cols, self.l - 1)
        C = np.tile(np.arange(1, self.l), len(cols))
        return J, C, (r[None, :] - (A[:, J] * C).T) % self.l

    def _singles_solve(self, b: dict[int, int], limit: int) -> dict[int, int] | None:
        """A minimal solution if its weight is <= limit (limit <= 3), else None.

        Weights are settled in increasing order; each level peels one column
        that meets a fixed nonzero row, which every solution must contain.
        """
        if limit < 1:
            return None
        if self._singles is None:
            self._build_singles()
        l = self.l
        bv = np.zeros(self.rows, dtype=np.int64)
        for i, v in b.items():
            bv[i] = v

        def merge(*parts):
            x: dict[int, int] = {}
            for j, c in parts:
                x[j] = (x.get(j, 0) + c) % l
            return {j: c for j, c in x.items() if c}

        hit = self._single_hits(bv[None, :])[0]
        if hit is not None or limit < 2:
            return None if hit is None else merge(hit)
        J, C, R = self._near_singles(bv)
        for k, hit in enumerate(self._single_hits(R)):
            if hit is not None:
                return merge((int(J[k]), int(C[k])), hit)
        if limit < 3:
            return None
        for k in range(len(R)):
            J2, C2, R2 = self._near_singles(R[k])
            for k2, hit in enumerate(self._single_hits(R2)):
                if hit is not None:
                    return merge((int(J[k]), int(C[k])), (int(J2[k2]), int(C2[k2])), hit)
        return None

    # -- meet in the middle ----------------------------------------------------
    def _hash(self, V: np.ndarray) -> np.ndarray:
        return V.astype(np.uint64) @ self._weights

    def _build_table(self):
        l = self.l
        A = self.csc.toarray()
        rows, cols = A.shape
        self._weights = np.random.default_rng(0x5EED).integers(
            1, 2**63, size=rows, dtype=np.uint64) | np.uint64(1)
        pats1 = np.arange(1, l, dtype=np.int64)
        pats2 = np.array([(a, b) for a in range(1, l) for b in range(1, l)], dtype=np.int64)
        parts_e = [np.array([[-1, -1, 0, 0]], dtype=np.int64)]
        parts_v = [np.zeros((1, rows), dtype=np.int64)]
        j = np.repeat(np.arange(cols), len(pats1))
        c = np.tile(pats1, cols)
        parts_e.append(np.stack([j, np.full_like(j, -1), c, np.zeros_like(c)], axis=1))
        parts_v.append((A[:, j] * c).T % l)
        for j1 in range(cols - 1):
            j2 = np.repeat(np.arange(j1 + 1, cols), len(pats2))
            cc = np.tile(pats2, (cols - j1 - 1, 1))
            parts_e.append(np.stack([np.full_like(j2, j1), j2, cc[:, 0], cc[:, 1]], axis=1))
            parts_v.append((A[:, [j1]].T * cc[:, :1] + A[:, j2].T * cc[:, 1:]) % l)
        E = np.concatenate(parts_e)
        V = np.concatenate(parts_v)
        H = self._hash(V)
        weight = (E[:, :2] >= 0).sum(axis=1)
        order = np.lexsort((weight, H))
        H, E, V, weight = H[order], E[order], V[order], weight[order]
        first = np.ones(len(H), dtype=bool)
        first[1:] = H[1:] != H[:-1]
        # entries containing each column, for scans restricted to one row's neighbourhood
        ref = np.concatenate([E[:, 0], E[:, 1]])
        owner = np.concatenate([np.arange(len(E)), np.arange(len(E))])
        keep = ref >= 0
        ref, owner = ref[keep], owner[keep]
        order = np.argsort(ref, kind="stable")
        bounds = np.searchsorted(ref[order], np.arange(cols + 1))
        self._by_col = (owner[order], bounds)
        # the lookup side only needs the lightest entry per hash
        self._table = (E, V, weight, H[first], np.flatnonzero(first))

    def _entries_near(self, b: dict[int, int]) -> np.ndarray:
        """Table entries using a column that meets the nonzero row of b with fewest columns.

        Any solution uses such a column, so one half of its split can be
        taken from these entries.
        """
        owner, bounds = self._by_col
        i = min(b, key=lambda r: (self.csr.indptr[r + 1] - self.csr.indptr[r], r))
        cols = self.adj(i)
        if not cols:
            return np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate([owner[bounds[j]:bounds[j + 1]] for j in cols]))

    def _table_solve(self, b: dict[int, int], limit: int) -> dict[int, int] | None:
        """A solution of weight <= limit (limit <= 4) from the pair table, or None."""
        if self._table is None:
            self._build_table()
        E, V, weight, keys, key_pos = self._table
        l = self.l
        target = np.zeros(self.rows, dtype=np.int64)
        for i, v in b.items():
            target[i] = v
        if not b:
            return {}
        near = self._entries_near(b)
        R = (target - V[near]) % l
        h = self._hash(R)
        hit = np.minimum(np.searchsorted(keys, h), len(keys) - 1)
        ok = keys[hit] == h
        idx = near[ok]
        R = R[ok]
        if not len(idx):
            return None
        partner = key_pos[hit[ok]]
        total = weight[idx] + weight[partner]
        for k in np.argsort(total, kind="stable"):
            if total[k] > limit:
                return None
            a, p = idx[k], partner[k]
            if not np.array_equal(V[p], R[k]):
                continue  # hash collision
            x: dict[int, int] = {}
            for e in (E[a], E[p]):
                for j, c in ((e[0], e[2]), (e[1], e[3])):
                    if j >= 0:
                        x[int(j)] = (x.get(int(j), 0) + int(c)) % l
            return {j: c for j, c in x.items() if c}
        return None

    # -- matrix access -------------------------------------------------------
    def col(self, j: int) -> dict[int, int]:
        c = self._col_cache.get(j)
        if c is None:
            a, b = self.csc.indptr[j], self.csc.indptr[j + 1]
            c = dict(zip(self.csc.indices[a:b].tolist(), self.csc.data[a:b].tolist()))
            self._col_cache[j] = c
        return c

    def adj(self, i: int):
        a, b = self.csr.indptr[i], self.csr.indptr[i + 1]
        return self.csr.indices[a:b].tolist()

    # -- reduced-basis helpers -------------------------------------------------
    def _reduce(self, v: dict[int, int], basis: dict[int, dict[int, int]]) -> dict[int, int]:
        l = self.l
        out = dict(v)
        for p, vec in basis.items():
            c = v.get(p)
            if c:
                for row, val in vec.items():
                    nv = (out.get(row, 0) - c * val) % l
                    if nv:
                        out[row] = nv
                    else:
                        out.pop(row, None)
        return out

    def _candidates(self, i, basis, chosen, excluded) -> list[int]:
        pool = set(self.adj(i))
        coupled = [(p, vec[i]) for p, vec in basis.items() if vec.get(i)]
        for p, _ in coupled:
            pool.update(self.adj(p))
        pool -= chosen
        pool -= excluded
        l = self.l
        out = []
        for j in sorted(pool):
            c = self.col(j)
            val = c.get(i, 0)
            for p, w in coupled:
                val -= c.get(p, 0) * w
            if val % l:
                out.append(j)
        return out

    def _tick(self):
        self.nodes += 1
        if self.nodes > self._budget:
            raise BudgetExhausted(f"search exceeded {self._budget} nodes")

    def _dfs(self, b, S, chosen, basis, r, excluded, touched, remaining):
        self._tick()
        if not r:
            return list(S)
        if remaining == 0:
            return None
        outside = sum(1 for i in b if i not in touched)
        if outside > remaining * self.max_col:
            return None
        best_i, best = None, None
        for i in sorted(r):
            cand = self._candidates(i, basis, chosen, excluded)
            if best is None or len(cand) < len(best):
                best_i, best = i, cand
                if len(cand) <= 1:
                    break
        if not best:
            return None
        l = self.l
        if remaining == 1:
            # the last column must reduce to a multiple of the residual
            for j in best:
                self._tick()
                u = self._reduce(self.col(j), basis)
                if len(u) != len(r):
                    continue
                s = r[best_i] * pow(u[best_i], -1, l) % l
                if all(r.get(row) == val * s % l for row, val in u.items()):
                    return S + [j]
            return None
        excl = set(excluded)
        for j in best:
            u = self._reduce(self.col(j), basis)
            s = pow(u[best_i], -1, l)
            u = {row: val * s % l for row, val in u.items()}
            nb = {}
            for p, vec in basis.items():
                c = vec.get(best_i)
                if c:
                    vec = dict(vec)
                    for row, val in u.items():
                        nv = (vec.get(row, 0) - c * val) % l
                        if nv:
                            vec[row] = nv
                        else:
                            vec.pop(row, None)
                nb[p] = vec
            nb[best_i] = u
            c = r[best_i]
            nr = dict(r)
            for row, val in u.items():
                nv = (nr.get(row, 0) - c * val) % l
                if nv:
                    nr[row] = nv
                else:
                    nr.pop(row, None)
            S.append(j)
            chosen.add(j)
            found = self._dfs(b, S, chosen, nb, nr, excl, touched | self.col(j).keys(),
                              remaining - 1)
            S.pop()
            chosen.discard(j)
            if found is not None:
                return found
            excl.add(j)
        return None

    def _coefficients(self, support: list[int], b: dict[int, int]) -> dict[int, int]:
        rows = sorted(set(b).union(*(self.col(j).keys() for j in support)))
        pos = {row: k for k, row in enumerate(rows)}
        a = np.zeros((len(rows), len(support)), dtype=np.int64)
        for k, j in enumerate(support):
            for row, val in self.col(j).items():
                a[pos[row], k] = val
        rhs = np.zeros(len(rows), dtype=np.int64)
        for row, val in b.items():
            rhs[pos[row]] = val
        y = dense_solve(a, rhs, self.l)
        if y is None:  # pragma: no cover - the search only returns consistent supports
            raise AssertionError("support returned by the search is inconsistent")
        return {j: int(c) for j, c in zip(support, y) if c}

    @staticmethod
    def _as_dict(b) -> dict[int, int]:
        if isinstance(b, dict):
            return {int(k): int(v) for k, v in b.items() if v}
        b = np.asarray(b, dtype=np.int64)
        nz = np.flatnonzero(b)
        return dict(zip(nz.tolist(), b[nz].tolist()))

    def _run_level(self, b: dict[int, int], w: int):
        return self._dfs(b, [], set(), {}, dict(b), set(), frozenset(), w)

    # -- public entry points -----------------------------------------------------
    def min_weight(self, b, ceiling: int, node_budget: int,
                   fallback: dict[int, int] | None = None) -> SearchOutcome:
        """Minimal-weight solution, certified exact when every lighter weight was exhausted.

        ``fallback`` is any known solution; it caps the deepening and is
        returned (flagged inexact) when the ceiling or the node budget stops
        the search first.
        """
        l = self.l
        b = {k: v % l for k, v in self._as_dict(b).items() if v % l}
        self.nodes = 0
        self._budget = node_budget
        if not b:
            return SearchOutcome({}, 0, True, 0)
        top = ceiling if fallback is None else min(ceiling, len(fallback) - 1)
        start = 1
        if self.use_table and top >= 1:
            x = self._table_solve(b, min(4, top))
            if x is not None:
                return SearchOutcome(x, len(x), True, 0)
            start = min(4, top) + 1
        elif self.use_singles and top >= 1:
            x = self._singles_solve(b, min(3, top))
            if x is not None:
                return SearchOutcome(x, len(x), True, 0)
            start = min(3, top) + 1
        try:
            for w in range(start, top + 1):
                support = self._run_level(b, w)
                if support is not None:
                    x = self._coefficients(support, b)
                    return SearchOutcome(x, len(x), True, self.nodes)
        except BudgetExhausted:
            if fallback is None:
                raise
            return SearchOutcome(dict(fallback), len(fallback), False, self.nodes)
        if fallback is None:
            return SearchOutcome(None, 0, False, self.nodes)
        return SearchOutcome(dict(fallback), len(fallback), top >= len(fallback) - 1, self.nodes)

    def within(self, b, w: int, node_budget: int) -> dict[int, int] | None:
        """Some solution of weight <= w, or None if none exists (BudgetExhausted if undecided)."""
        l = self.l
        b = {k: v % l for k, v in self._as_dict(b).items() if v % l}
        self.nodes = 0
        self._budget = node_budget
        if not b:
            return {}
        if self.use_table and w <= 4:
            return self._table_solve(b, w)
        if self.use_singles and w <= 3:
            return self._singles_solve(b, w)
        support = self._run_level(b, w)
        return None if support is None else self._coefficients(support, b)
