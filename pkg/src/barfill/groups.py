"""Finite groups behind a uniform element-index interface.

Every group has elements ``0..order-1``.  Products are available one at a
time (:meth:`FiniteGroup.mul`) or vectorised over numpy index arrays
(:meth:`FiniteGroup.mul_array`).  Small groups (order <= ``TABLE_MAX``)
materialise a full multiplication table; larger ones multiply on demand
from their concrete representation (matrices over F_q, permutations, ...).

Group specification grammar::

    cyclic:<m> | sym:<n> | dihedral:<2n> | gl:<n>:<q> | sl:<n>:<q>
    | torus:<r>:<q> | product:<spec>,<spec>
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import CapExceeded, PreconditionError, SpecError
from .field import FiniteField, prime_power

TABLE_MAX = 2048
PRODUCT_CACHE = 1 << 16
_TABLE_CHUNK = 1 << 18


class FiniteGroup:
    """A finite group on the index set ``0..order-1``.

    ``key`` identifies the group for caching (the normalised spec string for
    built groups).  Matrix groups also carry ``field``, ``degree`` and
    ``matrices`` (shape ``(order, n, n)``, entries encoded field elements).
    """

    def __init__(
        self,
        order: int,
        identity: int,
        mul_array: Callable[[np.ndarray, np.ndarray], np.ndarray],
        inverse: np.ndarray,
        *,
        key: str,
        backend: str,
        labeller: Callable[[int], str] = str,
        field: FiniteField | None = None,
        degree: int | None = None,
        matrices: np.ndarray | None = None,
        codes: np.ndarray | None = None,
    ):
        self.order = int(order)
        self.identity = int(identity)
        self.key = key
        self.field = field
        self.degree = degree
        self.matrices = matrices
        self._codes = codes
        self._labeller = labeller
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self.table: np.ndarray | None = None
        self._raw_mul = mul_array
        if self.order <= TABLE_MAX:
            self.table = _build_table(self.order, mul_array)
            self.backend = "explicit-table"
        else:
            self.backend = backend
        self._mul_cached = lru_cache(maxsize=PRODUCT_CACHE)(self._mul_one)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.key!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_mul_cached")
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._mul_cached = lru_cache(maxsize=PRODUCT_CACHE)(self._mul_one)

    def _mul_one(self, a: int, b: int) -> int:
        return int(self._raw_mul(np.array([a]), np.array([b]))[0])

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self._mul_cached(int(a), int(b))

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return self.table[a, b]
        a, b = np.broadcast_arrays(a, b)
        return self._raw_mul(a.ravel(), b.ravel()).reshape(a.shape)

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def label(self, g: int) -> str:
        return self._labeller(int(g))

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        if self.table is not None:
            return bool(np.array_equal(self.table, self.table.T))
        g = np.arange(self.order)
        for start in range(0, self.order, 256):
            a = g[start:start + 256, None]
            if not np.array_equal(self.mul_array(a, g[None, :]), self.mul_array(g[None, :], a)):
                return False
        return True

    def power(self, g, k: int):
        """g**k, elementwise over an index array, by repeated squaring."""
        g = np.asarray(g, dtype=np.int64)
        if k < 0:
            g, k = self.inverse[g], -k
        result = np.full(g.shape, self.identity, dtype=np.int64)
        base = g
        while k:
            if k & 1:
                result = self.mul_array(result, base)
            base = self.mul_array(base, base)
            k >>= 1
        return result if result.ndim else int(result)

    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        g = np.arange(self.order)
        cur = g.copy()
        k = 1
        while (orders == 0).any():
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            cur = self.mul_array(cur, g)
            k += 1
        return orders

    def index_of_matrix(self, m) -> int:
        """Index of a matrix (nested lists or array of encoded entries); -1 if absent."""
        if self.matrices is None or self._codes is None:
            raise PreconditionError(f"{self.key} is not a matrix group")
        code = _encode(np.asarray(m, dtype=np.int64).reshape(1, -1), self.field.q)[0]
        i = int(np.searchsorted(self._codes, code))
        return i if i < self.order and self._codes[i] == code else -1


def _build_table(order: int, mul_array) -> np.ndarray:
    table = np.empty((order, order), dtype=np.int64)
    rows = max(1, _TABLE_CHUNK // order)
    g = np.arange(order, dtype=np.int64)
    for start in range(0, order, rows):
        a = np.repeat(g[start:start + rows], order)
        b = np.tile(g, len(g[start:start + rows]))
        table[start:start + rows] = mul_array(a, b).reshape(-1, order)
    return table


# ---------------------------------------------------------------------------
# spec parsing

@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple[int, ...] = ()
    factors: tuple["GroupSpec", ...] = ()

    def __str__(self) -> str:
        if self.kind == "product":
            return "product:" + ",".join(str(f) for f in self.factors)
        return ":".join([self.kind, *map(str, self.params)])


_ARITY = {"cyclic": 1, "sym": 1, "dihedral": 1, "gl": 2, "sl": 2, "torus": 2}


def parse_spec(text: str) -> GroupSpec:
    """Parse a group specification; raises :class:`SpecError` with a diagnostic."""
    spec, pos = _parse(text.strip(), 0)
    if pos != len(text.strip()):
        raise SpecError(f"unexpected trailing text at column {pos}: {text!r}")
    return spec


def _parse(s: str, pos: int) -> tuple[GroupSpec, int]:
    colon = s.find(":", pos)
    if colon < 0:
        raise SpecError(f"expected '<kind>:' at column {pos} in {s!r}")
    kind = s[pos:colon]
    pos = colon + 1
    if kind == "product":
        left, pos = _parse(s, pos)
        if pos >= len(s) or s[pos] != ",":
            raise SpecError(f"product needs two comma-separated factors: {s!r}")
        right, pos = _parse(s, pos + 1)
        return GroupSpec("product", factors=(left, right)), pos
    if kind not in _ARITY:
        raise SpecError(f"unknown group kind {kind!r}; expected one of "
                        f"{sorted([*_ARITY, 'product'])}")
    params = []
    for i in range(_ARITY[kind]):
        if i:
            if pos >= len(s) or s[pos] != ":":
                raise SpecError(f"{kind} needs {_ARITY[kind]} integer parameters: {s!r}")
            pos += 1
        end = pos
        while end < len(s) and s[end].isdigit():
            end += 1
        if end == pos:
            raise SpecError(f"expected an integer at column {pos} in {s!r}")
        params.append(int(s[pos:end]))
        pos = end
    spec = GroupSpec(kind, tuple(params))
    _validate(spec)
    return spec, pos


def _validate(spec: GroupSpec) -> None:
    k, p = spec.kind, spec.params
    if k == "cyclic" and p[0] < 1:
        raise SpecError("cyclic:<m> needs m >= 1")
    if k == "sym" and p[0] < 1:
        raise SpecError("sym:<n> needs n >= 1")
    if k == "dihedral" and (p[0] < 2 or p[0] % 2):
        raise SpecError("dihedral:<2n> needs an even order >= 2")
    if k in ("gl", "sl", "torus"):
        if p[0] < 1:
            raise SpecError(f"{k}: matrix size must be >= 1")
        if prime_power(p[1]) is None:
            raise SpecError(f"{k}: q={p[1]} is not a prime power")


def spec_order(spec: GroupSpec) -> int:
    """Closed-form group order, computed before anything is enumerated."""
    k, p = spec.kind, spec.params
    if k == "cyclic":
        return p[0]
    if k == "sym":
        return math.factorial(p[0])
    if k == "dihedral":
        return p[0]
    if k in ("gl", "sl"):
        n, q = p
        gl = math.prod(q**n - q**i for i in range(n))
        return gl if k == "gl" else gl // (q - 1)
    if k == "torus":
        return (p[1] - 1) ** p[0]
    return math.prod(spec_order(f) for f in spec.factors)


# ---------------------------------------------------------------------------
# constructors

def build_group(spec: str | GroupSpec, config: RunConfig = DEFAULT) -> FiniteGroup:
    """Build the group named by ``spec``, refusing if its order exceeds the cap."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    order = spec_order(spec)
    if order > config.max_group_order:
        raise CapExceeded(f"{spec} has order {order} > cap {config.max_group_order}")
    return _build_cached(spec)


@lru_cache(maxsize=64)
def _build_cached(spec: GroupSpec) -> FiniteGroup:
    k, p = spec.kind, spec.params
    if k == "cyclic":
        return cyclic_group(p[0])
    if k == "sym":
        return symmetric_group(p[0])
    if k == "dihedral":
        return dihedral_group(p[0] // 2)
    if k in ("gl", "sl", "torus"):
        pe = prime_power(p[1])
        return matrix_group(k, p[0], FiniteField(*pe))
    left, right = (_build_cached(f) for f in spec.factors)
    return _product(left, right, key=str(spec))


def cyclic_group(m: int) -> FiniteGroup:
    return FiniteGroup(
        m, 0, lambda a, b: (a + b) % m, (-np.arange(m)) % m,
        key=f"cyclic:{m}", backend="on-demand",
    )


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index i + n*j stands for r^i s^j."""

    def mul(a, b):
        i, j = a % n, a // n
        k, m = b % n, b // n
        return (i + np.where(j == 1, -k, k)) % n + n * ((j + m) % 2)

    g = np.arange(2 * n)
    inverse = np.where(g < n, (-g) % n, g)

    def label(x: int) -> str:
        i, j = x % n, x // n
        return "e" if x == 0 else ("r^%d" % i if i else "") + ("s" if j else "")

    return FiniteGroup(2 * n, 0, mul, inverse, key=f"dihedral:{2 * n}",
                       backend="on-demand", labeller=label)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of 0..n-1 in lexicographic order of one-line notation.

    The product is composition, (s*t)(x) = s(t(x)).
    """
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    codes = _encode(perms, n)

    def mul(a, b):
        comp = np.take_along_axis(perms[a], perms[b], axis=1)
        return np.searchsorted(codes, _encode(comp, n))

    inverse = np.searchsorted(codes, _encode(np.argsort(perms, axis=1), n))
    return FiniteGroup(len(perms), 0, mul, inverse, key=f"sym:{n}", backend="on-demand",
                       labeller=lambda x: "[" + ",".join(map(str, perms[x])) + "]")


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    width = rows.shape[1]
    if width and base ** width >= 2**62:
        raise CapExceeded(f"element code space {base}^{width} too large")
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def _mat_mul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = F.mul(A[..., i, 0], B[..., 0, j])
            for k in range(1, n):
                acc = F.add(acc, F.mul(A[..., i, k], B[..., k, j]))
            out[..., i, j] = acc
    return out


def _det(F: FiniteField, M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    if n == 0:
        return np.ones(M.shape[:-2], dtype=np.int64)
    total = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = M[..., 0, perm[0]]
        for i in range(1, n):
            term = F.mul(term, M[..., i, perm[i]])
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total = F.add(total, F.neg(term) if inversions % 2 else term)
    return np.asarray(total, dtype=np.int64)


def _mat_inv(F: FiniteField, M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    dinv = F.inv(_det(F, M))
    out = np.empty_like(M)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, j, axis=-2), i, axis=-1)
            c = _det(F, minor)
            if (i + j) % 2:
                c = F.neg(c)
            out[..., i, j] = F.mul(c, dinv)
    return out


MATRIX_ENUM_MAX = 1 << 24


def matrix_group(kind: str, n: int, F: FiniteField) -> FiniteGroup:
    """GL_n(F_q), SL_n(F_q), or the diagonal torus (F_q^*)^n, indexed lexicographically."""
    q = F.q
    if kind == "torus":
        diag = np.array(list(itertools.product(range(1, q), repeat=n)), dtype=np.int64).reshape(-1, n)
        mats = np.zeros((len(diag), n, n), dtype=np.int64)
        mats[:, np.arange(n), np.arange(n)] = diag
    else:
        if q ** (n * n) > MATRIX_ENUM_MAX:
            raise CapExceeded(f"enumerating {q}^{n * n} matrices exceeds {MATRIX_ENUM_MAX}")
        codes_all = np.arange(q ** (n * n), dtype=np.int64)
        weights = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
        mats = ((codes_all[:, None] // weights) % q).reshape(-1, n, n)
        det = _det(F, mats)
        keep = det != 0 if kind == "gl" else det == 1
        mats = mats[keep]
    codes = _encode(mats.reshape(len(mats), -1), q)
    eye = np.eye(n, dtype=np.int64)
    identity = int(np.searchsorted(codes, _encode(eye.reshape(1, -1), q)[0]))

    def mul(a, b):
        prod = _mat_mul(F, mats[a], mats[b])
        return np.searchsorted(codes, _encode(prod.reshape(len(prod), -1), q))

    inv_mats = _mat_inv(F, mats)
    inverse = np.searchsorted(codes, _encode(inv_mats.reshape(len(mats), -1), q))

    def label(x: int) -> str:
        return "[" + ",".join("[" + ",".join(map(str, row)) + "]" for row in mats[x]) + "]"

    return FiniteGroup(len(mats), identity, mul, inverse, key=f"{kind}:{n}:{q}",
                       backend="matrix-over-F_q", labeller=label, field=F, degree=n,
                       matrices=mats, codes=codes)


def _product(G: FiniteGroup, H: FiniteGroup, key: str) -> FiniteGroup:
    h = H.order

    def mul(a, b):
        return G.mul_array(a // h, b // h) * h + H.mul_array(a % h, b % h)

    g = np.arange(G.order * h)
    inverse = G.inverse[g // h] * h + H.inverse[g % h]
    group = FiniteGroup(G.order * h, G.identity * h + H.identity, mul, inverse, key=key,
                        backend="on-demand",
                        labeller=lambda x: f"({G.label(x // h)}, {H.label(x % h)})")
    group.factors = (G, H)
    return group


def direct_product(G: FiniteGroup, H: FiniteGroup, config: RunConfig = DEFAULT) -> FiniteGroup:
    """G x H with componentwise product; element (g, h) has index g*|H| + h."""
    if G.order * H.order > config.max_group_order:
        raise CapExceeded(f"|G x H| = {G.order * H.order} > cap {config.max_group_order}")
    return _product(G, H, key=f"product:{G.key},{H.key}")


# ---------------------------------------------------------------------------
# subgroups, commutators, abelianization

def generated_subgroup(G: FiniteGroup, generators: Sequence[int]) -> np.ndarray:
    """Boolean membership mask of the subgroup generated by ``generators``."""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    gens = np.unique(np.asarray(list(generators), dtype=np.int64))
    frontier = np.array([G.identity], dtype=np.int64)
    while len(frontier) and len(gens):
        prods = np.unique(G.mul_array(frontier[:, None], gens[None, :]).ravel())
        frontier = prods[~mask[prods]]
        mask[frontier] = True
    return mask


def commutator_set(G: FiniteGroup) -> np.ndarray:
    """Sorted array of all commutators a*b*a^-1*b^-1."""
    seen = np.zeros(G.order, dtype=bool)
    g = np.arange(G.order, dtype=np.int64)
    rows = max(1, _TABLE_CHUNK // G.order)
    for start in range(0, G.order, rows):
        a = g[start:start + rows, None]
        ab = G.mul_array(a, g[None, :])
        c = G.mul_array(G.mul_array(ab, G.inverse[a]), G.inverse[g][None, :])
        seen[c.ravel()] = True
    return np.flatnonzero(seen)


def _closure_of(G: FiniteGroup, elements: np.ndarray) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    gens: list[int] = []
    for c in elements:
        if not mask[c]:
            gens.append(int(c))
            mask = generated_subgroup(G, gens)
    return mask


def derived_subgroup(G: FiniteGroup) -> set[int]:
    """[G, G]: the closure of the commutator set under multiplication."""
    return set(np.flatnonzero(_derived_mask(G)).tolist())


@lru_cache(maxsize=32)
def _derived_mask(G: FiniteGroup) -> np.ndarray:
    return _closure_of(G, commutator_set(G))


def commutator_length(G: FiniteGroup, g: int) -> int | None:
    """Least k such that g is a product of k commutators; None if g is not in [G, G]."""
    if not _derived_mask(G)[g]:
        return None
    if g == G.identity:
        return 0
    comms = commutator_set(G)
    reached = np.zeros(G.order, dtype=bool)
    reached[G.identity] = True
    level = np.array([G.identity], dtype=np.int64)
    k = 0
    while True:
        k += 1
        prods = np.unique(G.mul_array(level[:, None], comms[None, :]).ravel())
        new = prods[~reached[prods]]
        if g in set(new.tolist()):
            return k
        reached[new] = True
        level = np.flatnonzero(reached)


def subgroup_embedding(G: FiniteGroup, elements) -> tuple[FiniteGroup, np.ndarray]:
    """The subgroup on ``elements`` as a standalone group plus its inclusion map.

    Subgroup indices follow the order of the parent indices.
    """
    elems = np.unique(np.asarray(list(elements), dtype=np.int64))
    if len(elems) == 0 or elems[0] < 0 or elems[-1] >= G.order:
        raise PreconditionError("subgroup elements must be valid, non-empty indices")
    member = np.zeros(G.order, dtype=bool)
    member[elems] = True
    if not member[G.identity] or not member[G.inverse[elems]].all():
        raise PreconditionError("element set is not closed under inverses")
    for start in range(0, len(elems), 256):
        prods = G.mul_array(elems[start:start + 256, None], elems[None, :])
        if not member[prods].all():
            raise PreconditionError("element set is not closed under multiplication")
    if len(elems) == G.order:
        key = G.key
    else:
        digest = hashlib.sha1(elems.tobytes()).hexdigest()[:12]
        key = f"{G.key}/sub[{len(elems)}:{digest}]"

    def mul(a, b):
        return np.searchsorted(elems, G.mul_array(elems[a], elems[b]))

    inverse = np.searchsorted(elems, G.inverse[elems])
    identity = int(np.searchsorted(elems, G.identity))
    sub = FiniteGroup(len(elems), identity, mul, inverse, key=key, backend=G.backend,
                      labeller=lambda x: G.label(elems[x]), field=G.field, degree=G.degree,
                      matrices=None if G.matrices is None else G.matrices[elems],
                      codes=None if G._codes is None else G._codes[elems])
    return sub, elems


def diagonal_elements(G: FiniteGroup) -> np.ndarray:
    """Indices of the diagonal matrices of a matrix group (its standard split torus)."""
    if G.matrices is None:
        raise PreconditionError(f"{G.key} is not a matrix group")
    n = G.degree
    off = G.matrices.copy()
    off[:, np.arange(n), np.arange(n)] = 0
    return np.flatnonzero(~off.reshape(G.order, -1).any(axis=1))


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, np.ndarray]:
    """G / [G, G] by coset enumeration, with the projection as an index array.

    The identity coset is 0; the others are numbered in order of their
    smallest element.
    """
    D = np.flatnonzero(_derived_mask(G))
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in itertools.chain([G.identity], range(G.order)):
        if proj[g] < 0:
            proj[G.mul_array(g, D)] = len(reps)
            reps.append(g)
    reps = np.array(reps, dtype=np.int64)

    def mul(a, b):
        return proj[G.mul_array(reps[a], reps[b])]

    inverse = proj[G.inverse[reps]]
    quotient = FiniteGroup(len(reps), 0, mul, inverse, key=f"{G.key}/ab",
                           backend="on-demand", labeller=lambda x: f"{G.label(reps[x])}[G,G]")
    return quotient, proj


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(A: FiniteGroup) -> list[int]:
    """Invariant factors d_1 | d_2 | ... (all > 1) of an abelian group.

    Counts p^k-torsion elements for each prime p, which determines the
    multiset of cyclic p-power factors.
    """
    if not A.is_abelian():
        raise PreconditionError(f"{A.key} is not abelian")
    g = np.arange(A.order)
    primary: dict[int, list[int]] = {}
    for p in _prime_factors(A.order):
        ranks = []      # ranks[k-1] = number of cyclic factors of order >= p^k
        prev = 1
        k = 1
        while True:
            torsion = int((A.power(g, p**k) == A.identity).sum())
            step = round(math.log(torsion // prev, p))
            if step == 0:
                break
            ranks.append(step)
            prev = torsion
            k += 1
        exps = []
        for k, r in enumerate(ranks, 1):
            nxt = ranks[k] if k < len(ranks) else 0
            exps += [k] * (r - nxt)
        primary[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(p ** e[i] for p, e in primary.items() if i < len(e)))
    return sorted(factors)


SYMMETRY_ORDER_LIMIT = 2048


def automorphism_permutations(G: FiniteGroup) -> np.ndarray:
    """Rows are permutations of 0..|G|-1 forming a group of automorphisms of G.

    Power maps g -> g^k (k prime to the exponent) when G is abelian, inner
    automorphisms otherwise; just the identity above SYMMETRY_ORDER_LIMIT.
    """
    g = np.arange(G.order, dtype=np.int64)
    if G.order > SYMMETRY_ORDER_LIMIT:
        return g[None, :]
    if G.is_abelian():
        exp = int(np.lcm.reduce(G.element_orders()))
        perms = [G.power(g, k) for k in range(1, exp + 1) if math.gcd(k, exp) == 1]
    else:
        perms = [G.mul_array(G.mul_array(x, g), G.inverse[x]) for x in range(G.order)]
    return np.unique(np.array(perms, dtype=np.int64), axis=0)
