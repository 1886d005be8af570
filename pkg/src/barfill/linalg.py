"""Sparse linear algebra over GF(l): boundary matrices, rank, solving, kernels.

Matrices are stored column-major (scipy CSC) with entries in 0..l-1.  The
workhorse is :class:`EliminationCache`, a column-space echelon form built
once per matrix.  Columns are consumed left to right in blocks; each block
is first reduced against the current echelon basis through a sparse product
and then eliminated in place.  The basis ``E`` is kept in reduced form
(``E[pivot_rows] = I``), so

* ``reduce(b) = b - E b[pivot_rows]`` is the normal form of ``b`` modulo the
  column space (zero iff ``b`` is in the image), and
* with ``T = M[pivot_rows, pivot_cols]^-1`` one has ``M[:, pivot_cols] T = E``,
  which yields the canonical solution (free variables zero) and a kernel basis.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.io
import scipy.sparse as sp

from .chains import enumerate_tuples
from .config import DEFAULT, RunConfig
from .errors import CapExceeded, PreconditionError
from .groups import FiniteGroup

BLOCK = 4096


class SparseMatrix:
    """Immutable sparse matrix over GF(l) with optional basis tags on both sides."""

    def __init__(self, matrix, l: int, row_basis=None, col_basis=None):
        m = sp.csc_matrix(matrix, dtype=np.int64)
        m.data %= l
        m.eliminate_zeros()
        m.sort_indices()
        self.csc = m
        self.l = l
        self.row_basis = row_basis
        self.col_basis = col_basis
        self._elim: EliminationCache | None = None
        self._csr = None

    @classmethod
    def from_dense(cls, a, l: int, **tags) -> "SparseMatrix":
        return cls(np.asarray(a, dtype=np.int64) % l, l, **tags)

    @classmethod
    def identity(cls, k: int, l: int) -> "SparseMatrix":
        return cls(sp.identity(k, dtype=np.int64, format="csc"), l)

    @classmethod
    def zeros(cls, rows: int, cols: int, l: int) -> "SparseMatrix":
        return cls(sp.csc_matrix((rows, cols), dtype=np.int64), l)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, l={self.l})"

    @property
    def shape(self) -> tuple[int, int]:
        return self.csc.shape

    @property
    def rows(self) -> int:
        return self.csc.shape[0]

    @property
    def cols(self) -> int:
        return self.csc.shape[1]

    @property
    def nnz(self) -> int:
        return self.csc.nnz

    @property
    def csr(self):
        if self._csr is None:
            self._csr = self.csc.tocsr()
        return self._csr

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.csc.indptr[j], self.csc.indptr[j + 1]
        return self.csc.indices[a:b], self.csc.data[a:b]

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if x.shape[0] != self.cols:
            raise PreconditionError(f"vector of length {x.shape[0]} against {self.cols} columns")
        return np.asarray(self.csc @ x) % self.l

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        return SparseMatrix(self.csc @ other.csc, self.l)

    def to_dense(self) -> np.ndarray:
        return self.csc.toarray()

    def elimination(self) -> "EliminationCache":
        if self._elim is None:
            self._elim = EliminationCache(self)
        return self._elim

    def write_matrix_market(self, path) -> None:
        scipy.io.mmwrite(str(path), self.csc, field="integer",
                         comment=f"GF({self.l}) entries in 0..{self.l - 1}")


# ---------------------------------------------------------------------------
# dense helpers for small systems

def dense_rref(a, l: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod l and the pivot columns."""
    a = np.array(a, dtype=np.int64) % l
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not len(nz):
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, l) % l
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % l
        pivots.append(c)
        r += 1
    return a, pivots


def dense_inverse(a, l: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    k = a.shape[0]
    aug, piv = dense_rref(np.hstack([a, np.eye(k, dtype=np.int64)]), l)
    if piv[:k] != list(range(k)):
        raise PreconditionError("matrix is singular mod l")
    return aug[:, k:]


def dense_solve(a, b, l: int) -> np.ndarray | None:
    """Some solution of a x = b mod l (free variables zero), or None."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    aug, piv = dense_rref(np.hstack([a, np.asarray(b, dtype=np.int64).reshape(-1, 1)]), l)
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = aug[i, -1]
    return x


# ---------------------------------------------------------------------------
# elimination

class EliminationCache:
    """Column-space echelon form of a :class:`SparseMatrix` (see module docstring)."""

    def __init__(self, M: SparseMatrix, max_rows: int = DEFAULT.max_echelon_rows):
        if M.rows > max_rows:
            raise CapExceeded(f"elimination of a {M.rows}-row matrix exceeds cap {max_rows}")
        self.matrix = M
        self.l = l = M.l
        m, N = M.shape
        E = np.zeros((m, max(m, 1)), dtype=np.int64)
        pivot_rows: list[int] = []
        pivot_cols: list[int] = []
        r = 0
        csc = M.csc
        for j0 in range(0, N, BLOCK):
            if r == m:
                break
            X = csc[:, j0:j0 + BLOCK].toarray()
            if r:
                S = sp.csr_matrix(X[pivot_rows, :])
                if S.nnz:
                    X = (X - np.asarray(S.T @ E[:, :r].T).T) % l
            live = np.flatnonzero(X.any(axis=0))
            if not len(live):
                continue
            Y = X[:, live]
            weight = (Y != 0).sum(axis=1)
            for k in range(Y.shape[1]):
                col = Y[:, k]
                nz = np.flatnonzero(col)
                if not len(nz):
                    continue
                # sparsest row first (Markowitz-style)
                p = int(nz[np.argmin(weight[nz])])
                v = col * pow(int(col[p]), -1, l) % l
                if r:
                    hit = np.flatnonzero(E[p, :r])
                    if len(hit):
                        E[:, hit] = (E[:, hit] - np.outer(v, E[p, hit])) % l
                E[:, r] = v
                hit = k + 1 + np.flatnonzero(Y[p, k + 1:])
                if len(hit):
                    Y[:, hit] = (Y[:, hit] - np.outer(v, Y[p, hit])) % l
                pivot_rows.append(p)
                pivot_cols.append(j0 + int(live[k]))
                r += 1
                if r == m:
                    break
        self.rank = r
        self.E = E[:, :r]
        self.pivot_rows = np.array(pivot_rows, dtype=np.int64)
        self.pivot_cols = np.array(pivot_cols, dtype=np.int64)
        self._T: np.ndarray | None = None

    @property
    def T(self) -> np.ndarray:
        if self._T is None:
            sub = self.matrix.csr[self.pivot_rows][:, self.pivot_cols].toarray()
            self._T = dense_inverse(sub, self.l) if self.rank else np.zeros((0, 0), np.int64)
        return self._T

    def reduce(self, b) -> np.ndarray:
        """Normal form of ``b`` (vector or column stack) modulo the column space."""
        b = np.asarray(b, dtype=np.int64) % self.l
        if not self.rank:
            return b
        return (b - self.E @ b[self.pivot_rows]) % self.l

    def in_image(self, b) -> bool:
        return not self.reduce(b).any()

    def solve(self, b) -> np.ndarray | None:
        b = np.asarray(b, dtype=np.int64) % self.l
        if b.shape[0] != self.matrix.rows:
            raise PreconditionError(f"right-hand side of length {b.shape[0]}, expected {self.matrix.rows}")
        if self.reduce(b).any():
            return None
        x = np.zeros(self.matrix.cols, dtype=np.int64)
        if self.rank:
            x[self.pivot_cols] = self.T @ b[self.pivot_rows] % self.l
        return x

    def free_columns(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.matrix.cols), self.pivot_cols)

    def kernel_block(self, free) -> np.ndarray:
        """Kernel vectors (rows) attached to the given non-pivot columns."""
        free = np.asarray(free, dtype=np.int64)
        K = np.zeros((len(free), self.matrix.cols), dtype=np.int64)
        K[np.arange(len(free)), free] = 1
        if self.rank and len(free):
            sub = self.matrix.csr[self.pivot_rows][:, free].toarray()
            K[:, self.pivot_cols] = (-(self.T @ sub)).T % self.l
        return K

    def nullspace(self, max_entries: int = 5 * 10**7) -> np.ndarray:
        """Kernel basis as rows of a dense array, one per non-pivot column."""
        free = self.free_columns()
        if len(free) * self.matrix.cols > max_entries:
            raise CapExceeded(f"dense kernel basis of {len(free)} x {self.matrix.cols} "
                              f"exceeds {max_entries} entries")
        return self.kernel_block(free)


def rank(M: SparseMatrix) -> int:
    return M.elimination().rank


def solve(M: SparseMatrix, b) -> np.ndarray | None:
    """Canonical solution of M x = b (free variables zero); None when inconsistent."""
    return M.elimination().solve(b)


def nullspace_basis(M: SparseMatrix) -> list[np.ndarray]:
    return list(M.elimination().nullspace())


# ---------------------------------------------------------------------------
# bar complex in matrix form

def boundary_matrix(G: FiniteGroup, n: int, l: int, config: RunConfig = DEFAULT) -> SparseMatrix:
    """Matrix of d_n : C_n -> C_{n-1} in the lexicographic tuple bases."""
    if n < 0:
        raise PreconditionError("degree must be >= 0")
    enumerate_tuples(G, n, config)
    if n >= 1:
        enumerate_tuples(G, n - 1, config)
        if (n + 1) * G.order ** n > config.max_nnz:
            raise CapExceeded(f"D_{n} would hold up to {(n + 1) * G.order ** n} nonzeros "
                              f"> cap {config.max_nnz}")
    return _boundary_matrix(G, n, l)


@lru_cache(maxsize=32)
def _boundary_matrix(G: FiniteGroup, n: int, l: int) -> SparseMatrix:
    tags = dict(row_basis=(G.key, n - 1), col_basis=(G.key, n))
    if n == 0:
        return SparseMatrix(sp.csc_matrix((0, 1), dtype=np.int64), l, **tags)
    g = G.order
    N = g ** n
    cols = np.arange(N, dtype=np.int64)
    digits = (cols[:, None] // (g ** np.arange(n - 1, -1, -1, dtype=np.int64))) % g
    w = g ** np.arange(n - 2, -1, -1, dtype=np.int64) if n >= 2 else np.zeros(0, np.int64)
    rows, data = [], []
    for i in range(n + 1):
        if i == 0:
            f = digits[:, 1:]
        elif i == n:
            f = digits[:, :-1]
        else:
            merged = G.mul_array(digits[:, i - 1], digits[:, i])[:, None]
            f = np.hstack([digits[:, :i - 1], merged, digits[:, i + 1:]])
        rows.append(f @ w if n >= 2 else np.zeros(N, dtype=np.int64))
        data.append(np.full(N, (-1) ** i, dtype=np.int64))
    coo = sp.coo_matrix((np.concatenate(data), (np.concatenate(rows), np.tile(cols, n + 1))),
                        shape=(g ** (n - 1), N))
    return SparseMatrix(coo.tocsc(), l, **tags)


def elimination(G: FiniteGroup, n: int, l: int, config: RunConfig = DEFAULT) -> EliminationCache:
    """The shared elimination of D_n for the triple (G, n, l)."""
    M = boundary_matrix(G, n, l, config)
    if M._elim is None:
        M._elim = EliminationCache(M, config.max_echelon_rows)
    return M._elim
