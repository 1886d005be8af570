"""Group homology H_n(G; Z/l) from the bar complex.

Classes are read off through a coordinate functional.  Let ``E`` be the
reduced echelon basis of im D_{n+1}.  The normal form ``NF(z) = z - E z[pr]``
vanishes exactly on boundaries, and on cycles it takes values in an
h-dimensional space with a reduced basis ``U`` (pivot positions ``hp``).  The
class of a cycle ``z`` in the basis dual to ``U`` is ``NF(z)[hp]``.
Representatives are normalised so that representative ``i`` has coordinates
``e_i``, then (optionally) replaced by a minimal-size cycle with the same
coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.sparse as sp

from .chains import Chain, boundary, check_modulus
from .config import DEFAULT, RunConfig
from .errors import CapExceeded, PreconditionError
from .groups import FiniteGroup, diagonal_elements, subgroup_embedding
from .linalg import dense_inverse, dense_rref, elimination
from .search import MinWeightSolver

KERNEL_BLOCK = 1024

# (max |G|, max degree) pairs; larger groups or degrees are refused
DEGREE_CAPS = ((50, 3), (400, 2), (20000, 1))


def check_degree(G: FiniteGroup, n: int) -> None:
    if n < 0:
        raise PreconditionError("degree must be >= 0")
    for bound, top in DEGREE_CAPS:
        if G.order <= bound:
            if n > top:
                raise CapExceeded(f"homology in degree {n} is refused for |G| = {G.order} "
                                  f"(limit {top})")
            return
    raise CapExceeded(f"|G| = {G.order} exceeds every homology degree cap")


@dataclass(eq=False)
class HomologyResult:
    group: FiniteGroup
    n: int
    l: int
    dim: int
    reps: list[Chain]
    nullity: int                 # dim ker D_n
    rank_next: int               # rank D_{n+1}
    rank_n: int                  # rank D_n
    reps_minimal: bool = False   # every rep certified minimal in its class
    _hp: np.ndarray = field(default=None, repr=False)
    _ehp: np.ndarray = field(default=None, repr=False)
    _pr: np.ndarray = field(default=None, repr=False)

    def coordinates(self, z) -> np.ndarray:
        """Class of a cycle (Chain or coordinate vector) in the basis of ``reps``."""
        if isinstance(z, Chain):
            if (z.group, z.n, z.l) != (self.group, self.n, self.l):
                raise PreconditionError("chain does not live in this homology group")
            if z.n >= 1 and not boundary(z).is_zero():
                raise PreconditionError("coordinates are defined for cycles only")
            z = z.to_vector()
        z = np.asarray(z, dtype=np.int64)
        if not self.dim:
            return np.zeros(0, dtype=np.int64)
        return (z[self._hp] - self._ehp @ z[self._pr]) % self.l

    def functional_matrix(self) -> sp.csr_matrix:
        """The coordinate map as a sparse dim x |G|^n matrix."""
        N = self.group.order ** self.n
        Q = np.zeros((self.dim, N), dtype=np.int64)
        if self.dim:
            Q[:, self._pr] = -self._ehp
            Q[np.arange(self.dim), self._hp] += 1
        return sp.csr_matrix(Q % self.l)

    def to_dict(self) -> dict:
        return {"group": self.group.key, "n": self.n, "l": self.l, "dim": self.dim,
                "reps": [r.to_dict() for r in self.reps],
                "reps_minimal": self.reps_minimal,
                "ranks": {"nullity_d_n": self.nullity, "rank_d_n": self.rank_n,
                          "rank_d_n_plus_1": self.rank_next}}


_CACHE: dict[tuple, HomologyResult] = {}


def homology(G: FiniteGroup, n: int, l: int, config: RunConfig = DEFAULT,
             minimize: bool = True) -> HomologyResult:
    """dim H_n(G; Z/l) with a basis of class representatives.

    With ``minimize`` each representative is a minimal-size cycle of its
    class (``reps_minimal`` reports whether that was certified within the
    search budget).
    """
    check_modulus(l)
    check_degree(G, n)
    key = (G.key, n, l, minimize)
    if key not in _CACHE:
        _CACHE[key] = _compute(G, n, l, config, minimize)
    return _CACHE[key]


def _compute(G, n, l, config, minimize) -> HomologyResult:
    g = G.order
    N = g ** n
    up = elimination(G, n + 1, l, config)
    if n >= 1:
        down = elimination(G, n, l, config)
        rank_n = down.rank
        free = down.free_columns()
    else:
        down, rank_n, free = None, 0, np.zeros(1, dtype=np.int64)
    nullity = N - rank_n
    h = nullity - up.rank
    chosen: list[np.ndarray] = []     # cycles whose normal forms are independent
    basis: list[np.ndarray] = []      # reduced normal forms (row echelon)
    pivots: list[int] = []
    for start in range(0, len(free), KERNEL_BLOCK):
        if len(chosen) == h:
            break
        block = free[start:start + KERNEL_BLOCK]
        K = down.kernel_block(block) if down is not None else np.ones((1, 1), dtype=np.int64)
        NF = up.reduce(K.T).T
        for z, v in zip(K, NF):
            if not v.any():
                continue
            for p, u in zip(pivots, basis):
                if v[p]:
                    v = (v - v[p] * u) % l
            nz = np.flatnonzero(v)
            if not len(nz):
                continue
            p = int(nz[0])
            v = v * pow(int(v[p]), -1, l) % l
            for k, u in enumerate(basis):
                if u[p]:
                    basis[k] = (u - u[p] * v) % l
            basis.append(v)
            pivots.append(p)
            chosen.append(z)
            if len(chosen) == h:
                break
    if len(chosen) != h:  # pragma: no cover - rank bookkeeping guarantees h cycles
        raise AssertionError("failed to complete a basis of homology")
    hp = np.array(pivots, dtype=np.int64)
    pr = up.pivot_rows
    ehp = up.E[hp, :] if h else np.zeros((0, up.rank), dtype=np.int64)
    res = HomologyResult(G, n, l, h, [], nullity, up.rank, rank_n, False, hp, ehp, pr)
    if h:
        Z = np.array(chosen)
        C = np.array([res.coordinates(z) for z in Z]).T          # h x h
        reps = (dense_inverse(C, l).T @ Z) % l                   # rows: Q(rep_i) = e_i
    else:
        reps = np.zeros((0, N), dtype=np.int64)
    exact = True
    if minimize and h:
        reps, exact = _minimize(res, reps, config)
    res.reps = [Chain.from_vector(G, n, l, r) for r in reps]
    res.reps_minimal = bool(minimize and exact)
    return res


def _stacked_solver(res: HomologyResult, config: RunConfig) -> MinWeightSolver:
    """Solver for [D_n; Q] x = [0; a]: cycles with prescribed class coordinates."""
    from .linalg import boundary_matrix

    G, n, l = res.group, res.n, res.l
    D = boundary_matrix(G, n, l, config).csc if n >= 1 else sp.csc_matrix((0, 1), dtype=np.int64)
    return MinWeightSolver(sp.vstack([D, res.functional_matrix()]).tocsc(), l)


def _class_target(res: HomologyResult, a) -> np.ndarray:
    rows = res.group.order ** (res.n - 1) if res.n >= 1 else 0
    return np.concatenate([np.zeros(rows, dtype=np.int64), np.asarray(a, dtype=np.int64)])


def _minimize(res, reps, config):
    solver = _stacked_solver(res, config)
    out = []
    exact = True
    for i, r in enumerate(reps):
        a = np.zeros(res.dim, dtype=np.int64)
        a[i] = 1
        nz = np.flatnonzero(r)
        o = solver.min_weight(_class_target(res, a), config.max_weight, config.search_nodes,
                              fallback=dict(zip(nz.tolist(), r[nz].tolist())))
        v = np.zeros_like(r)
        for j, c in o.x.items():
            v[j] = c
        out.append(v)
        exact &= o.exact
    return np.array(out), exact


def _vector(c: Chain) -> np.ndarray:
    return c.to_vector()


def is_cycle(c: Chain) -> bool:
    return c.n == 0 or boundary(c).is_zero()


def is_boundary(b: Chain, witness: bool = False, config: RunConfig = DEFAULT):
    """Whether ``b`` lies in B_n; with ``witness`` also return the canonical filler (or None)."""
    elim = elimination(b.group, b.n + 1, b.l, config)
    if not witness:
        return elim.in_image(_vector(b))
    x = elim.solve(_vector(b))
    if x is None:
        return False, None
    return True, Chain.from_vector(b.group, b.n + 1, b.l, x)


def homologous(z1: Chain, z2: Chain, config: RunConfig = DEFAULT) -> bool:
    if not (is_cycle(z1) and is_cycle(z2)):
        raise PreconditionError("homologous() expects two cycles")
    return is_boundary(z1 - z2, config=config)


@dataclass
class RepresentativeBound:
    value: int
    exact: bool
    classes: int                 # projective classes examined

    def to_dict(self) -> dict:
        return {"value": self.value, "exact": self.exact, "classes": self.classes}


def minimal_representative_bound(G: FiniteGroup, n: int, l: int,
                                 config: RunConfig = DEFAULT) -> RepresentativeBound:
    """max over classes of the minimal cycle size representing the class.

    Scaling preserves size, so one class per line (first nonzero coordinate 1)
    is enough.
    """
    res = homology(G, n, l, config, minimize=False)
    h = res.dim
    if not h:
        return RepresentativeBound(0, True, 0)
    count = (l ** h - 1) // (l - 1)
    if count > config.max_classes:
        raise CapExceeded(f"{count} projective classes exceed cap {config.max_classes}")
    solver = _stacked_solver(res, config)
    R = np.array([r.to_vector() for r in res.reps])
    best, exact = 0, True
    for a in itertools.product(range(l), repeat=h):
        nz = [x for x in a if x]
        if not nz or nz[0] != 1:
            continue
        fb = np.array(a, dtype=np.int64) @ R % l
        j = np.flatnonzero(fb)
        o = solver.min_weight(_class_target(res, a), config.max_weight, config.search_nodes,
                              fallback=dict(zip(j.tolist(), fb[j].tolist())))
        best = max(best, o.weight)
        exact &= o.exact
    return RepresentativeBound(best, exact, count)


@dataclass
class InducedMap:
    source: HomologyResult
    target: HomologyResult
    matrix: np.ndarray           # dim target x dim source
    rank: int

    @property
    def surjective(self) -> bool:
        return self.rank == self.target.dim

    @property
    def injective(self) -> bool:
        return self.rank == self.source.dim

    def to_dict(self) -> dict:
        return {"source": self.source.group.key, "target": self.target.group.key,
                "n": self.source.n, "l": self.source.l,
                "dim_source": self.source.dim, "dim_target": self.target.dim,
                "matrix": self.matrix.tolist(), "rank": self.rank,
                "surjective": self.surjective, "injective": self.injective}


def induced_map(inclusion: tuple[FiniteGroup, FiniteGroup, np.ndarray], n: int, l: int,
                config: RunConfig = DEFAULT) -> InducedMap:
    """H_n(T) -> H_n(G) for ``inclusion = (T, G, images)``, ``images[t]`` the index in G."""
    T, G, images = inclusion
    images = np.asarray(images, dtype=np.int64)
    src = homology(T, n, l, config, minimize=False)
    tgt = homology(G, n, l, config, minimize=False)
    cols = [tgt.coordinates(r.map_tuples(images, G)) for r in src.reps]
    M = np.array(cols, dtype=np.int64).T.reshape(tgt.dim, src.dim)
    r = len(dense_rref(M, l)[1]) if M.size else 0
    return InducedMap(src, tgt, M % l, r)


def diagonal_torus(G: FiniteGroup) -> tuple[FiniteGroup, FiniteGroup, np.ndarray]:
    """The diagonal torus of a matrix group as an inclusion triple."""
    T, elems = subgroup_embedding(G, diagonal_elements(G))
    return T, G, elems


@dataclass
class IndexCheck:
    index: int
    prime_to_l: bool

    def to_dict(self) -> dict:
        return {"index": self.index, "prime_to_l": self.prime_to_l}


def index_prime_to_l(G: FiniteGroup, T, l: int) -> IndexCheck:
    """[G : T] and whether it is prime to l.  ``T`` is a group or its order."""
    t = T if isinstance(T, int) else T.order
    if t <= 0 or G.order % t:
        raise PreconditionError(f"{t} does not divide |G| = {G.order}")
    idx = G.order // t
    return IndexCheck(idx, gcd(idx, l) == 1)
