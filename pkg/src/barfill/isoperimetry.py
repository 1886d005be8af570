"""Filler norms, the isoperimetric profile, filler distance and the sentences Phi and Psi."""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx
import numpy as np

from .chains import Chain, TupleBasis, check_modulus, enumerate_tuples, random_chain
from .config import DEFAULT, RunConfig
from .errors import BudgetExhausted, CapExceeded, PreconditionError
from .groups import (FiniteGroup, automorphism_permutations, build_group, commutator_length,
                     derived_subgroup)
from .homology import homology, homologous, is_cycle
from .linalg import boundary_matrix, elimination
from .search import MinWeightSolver

CHUNK = 2048


class _Filling:
    """Everything needed to fill degree-n boundaries of (G, l): D_{n+1} and its solvers."""

    def __init__(self, G: FiniteGroup, n: int, l: int, config: RunConfig):
        self.G, self.n, self.l = G, n, l
        self.elim = elimination(G, n + 1, l, config)
        self.D = boundary_matrix(G, n + 1, l, config)
        self.solver = MinWeightSolver(self.D.csc, l)
        self.top = TupleBasis(G, n + 1)
        self.rows = G.order ** n
        self._cache: dict[tuple, tuple] = {}    # normalised boundary -> fill outcome
        self._perms: np.ndarray | None = None

    def canonical(self, b: dict[int, int]) -> dict[int, int] | None:
        v = np.zeros(self.rows, dtype=np.int64)
        for i, c in b.items():
            v[i] = c
        x = self.elim.solve(v)
        if x is None:
            return None
        nz = np.flatnonzero(x)
        return dict(zip(nz.tolist(), x[nz].tolist()))

    def fill(self, b: dict[int, int], config: RunConfig, ceiling=None, budget=None):
        """(size, solution, exact, nodes); None if b is not a boundary.

        Filler norms are scale invariant, so outcomes are cached per
        normalised boundary and rescaled on the way out.
        """
        ceiling = config.max_weight if ceiling is None else ceiling
        budget = config.search_nodes if budget is None else budget
        if not b:
            return 0, {}, True, 0
        l = self.l
        items = sorted(b.items())
        inv = pow(items[0][1], -1, l)
        key = (tuple((i, v * inv % l) for i, v in items), ceiling, budget)
        if key not in self._cache:
            self._cache[key] = self._fill(dict(key[0]), ceiling, budget)
        out = self._cache[key]
        if out is None:
            return None
        s = items[0][1]
        return out[0], {j: c * s % l for j, c in out[1].items()}, out[2], out[3]

    def orbit_key(self, b: dict[int, int]) -> tuple:
        """Smallest normalised image of b under automorphisms of G and nonzero scalars."""
        if self._perms is None:
            self._perms = _tuple_permutations(self.G, self.n)
        l = self.l
        idx = np.fromiter(b.keys(), dtype=np.int64, count=len(b))
        vals = list(b.values())
        best = None
        for img in self._perms[:, idx].tolist():
            items = sorted(zip(img, vals))
            inv = pow(items[0][1], -1, l)
            key = tuple((i, v * inv % l) for i, v in items)
            if best is None or key < best:
                best = key
        return best

    def within(self, b: dict[int, int], w: int, budget: int) -> bool:
        """Whether a chain of size <= w fills b (BudgetExhausted if undecided).

        The answer is invariant under automorphisms and scaling, so it is
        cached per orbit.
        """
        if not b:
            return True
        key = ("within", self.orbit_key(b), w)
        if key not in self._cache:
            self._cache[key] = self.solver.within(dict(key[1]), w, budget) is not None
        return self._cache[key]

    def _fill(self, b, ceiling, budget):
        try:
            o = self.solver.min_weight(b, ceiling, budget)
            if o.x is not None:
                return o.weight, o.x, True, o.nodes
            nodes = o.nodes
        except BudgetExhausted:
            nodes = self.solver.nodes
            fb = self.canonical(b)
            return (None if fb is None else (len(fb), fb, False, nodes))
        fb = self.canonical(b)
        if fb is None:
            return None
        # every weight <= ceiling was exhausted, so the canonical solution is
        # minimal exactly when it is one heavier than the ceiling
        return len(fb), fb, len(fb) <= ceiling + 1, nodes

    def to_chain(self, x: dict[int, int]) -> Chain:
        return Chain(self.G, self.n + 1, self.l,
                     {self.top.tuple_at(j): c for j, c in x.items()}, _trusted=True)


_FILLINGS: dict[tuple, _Filling] = {}


def _filling(G: FiniteGroup, n: int, l: int, config: RunConfig = DEFAULT) -> _Filling:
    key = (G.key, n, l)
    if key not in _FILLINGS:
        _FILLINGS[key] = _Filling(G, n, l, config)
    return _FILLINGS[key]


def _as_dict(c: Chain) -> dict[int, int]:
    basis = TupleBasis(c.group, c.n)
    return {basis.index(t): v for t, v in c.terms()}


@dataclass
class FillerResult:
    chain: Chain
    filler_size: int
    witness: Chain
    exact: bool
    nodes_explored: int
    budget: int

    def to_dict(self) -> dict:
        return {"chain": self.chain.to_dict(), "filler_size": self.filler_size,
                "witness": self.witness.to_dict(), "exact": self.exact,
                "nodes_explored": self.nodes_explored, "budget": self.budget}


def filler_norm(b: Chain, config: RunConfig = DEFAULT, budget: int | None = None) -> FillerResult:
    """Minimal size of a chain whose boundary is ``b``, with a witness."""
    budget = config.search_nodes if budget is None else budget
    ctx = _filling(b.group, b.n, b.l, config)
    out = ctx.fill(_as_dict(b), config, budget=budget)
    if out is None:
        raise PreconditionError("chain is not a boundary")
    size, x, exact, nodes = out
    return FillerResult(b, size, ctx.to_chain(x), exact, nodes, budget)


def filler_distance(z1: Chain, z2: Chain, config: RunConfig = DEFAULT,
                    budget: int | None = None) -> FillerResult:
    if not homologous(z1, z2, config):
        raise PreconditionError("cycles are not homologous")
    return filler_norm(z1 - z2, config, budget)


def has_filler_within(b: Chain, w: int, config: RunConfig = DEFAULT) -> bool:
    """Whether some chain of size <= w fills ``b`` (BudgetExhausted if undecided)."""
    ctx = _filling(b.group, b.n, b.l, config)
    return ctx.solver.within(_as_dict(b), w, config.search_nodes) is not None


# ---------------------------------------------------------------------------
# censuses

def census_size(G: FiniteGroup, n: int, l: int, K: int) -> int:
    """Number of degree-n chains of size exactly K."""
    return math.comb(G.order ** n, K) * (l - 1) ** K


def _patterns(l: int, K: int, normalized: bool) -> np.ndarray:
    pats = [p for p in itertools.product(range(1, l), repeat=K) if not normalized or p[0] == 1]
    return np.array(pats, dtype=np.int64).reshape(len(pats), K)


def _chain_batches(N: int, l: int, K: int, normalized: bool, start: int = 0, stop: int | None = None):
    """Yield (support_index, supports, coeffs): all size-K chains on N basis vectors.

    Supports come in lexicographic order, each crossed with the lexicographic
    coefficient patterns; with ``normalized`` the first coefficient is 1.
    """
    pats = _patterns(l, K, normalized)
    combos = itertools.islice(itertools.combinations(range(N), K), start, stop)
    idx = start
    while True:
        block = list(itertools.islice(combos, CHUNK))
        if not block:
            return
        S = np.array(block, dtype=np.int64).reshape(len(block), K)
        supports = np.repeat(S, len(pats), axis=0)
        coeffs = np.tile(pats, (len(S), 1))
        idx += len(block)
        yield idx, supports, coeffs


def _dense(N: int, supports: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    B = np.zeros((N, len(supports)), dtype=np.int64)
    cols = np.repeat(np.arange(len(supports)), supports.shape[1])
    B[supports.ravel(), cols] = coeffs.ravel()
    return B


def _boundary_mask(G, n, l, config, supports, coeffs) -> np.ndarray:
    N = G.order ** n
    B = _dense(N, supports, coeffs)
    if n >= 1:
        cyc = ~(np.asarray(boundary_matrix(G, n, l, config).csc @ B) % l).any(axis=0)
    else:
        cyc = np.ones(B.shape[1], dtype=bool)
    out = np.zeros(B.shape[1], dtype=bool)
    if cyc.any():
        out[cyc] = ~elimination(G, n + 1, l, config).reduce(B[:, cyc]).any(axis=0)
    return out


def _iter_boundaries(G, n, l, K, config, normalized=True, start=0, stop=None):
    """Yield (support_index, [boundary dicts]) over the size-K census."""
    for idx, supports, coeffs in _chain_batches(G.order ** n, l, K, normalized, start, stop):
        mask = _boundary_mask(G, n, l, config, supports, coeffs)
        yield idx, [dict(zip(s.tolist(), c.tolist())) for s, c in zip(supports[mask], coeffs[mask])]


def _tuple_permutations(G: FiniteGroup, n: int) -> np.ndarray:
    """Automorphisms of G acting diagonally on the basis of degree-n tuples."""
    perms = automorphism_permutations(G)
    basis = TupleBasis(G, n)
    digits = basis.digits(np.arange(basis.size))
    return np.stack([basis.encode(p[digits]) for p in perms])


def _orbit_weights(perms: np.ndarray, l: int, supports: np.ndarray,
                   coeffs: np.ndarray) -> np.ndarray:
    """Orbit size of each normalized chain under automorphisms and scalars, 0 if not minimal.

    A chain is kept when no image, rescaled to leading coefficient 1, is
    lexicographically smaller (support first, then coefficients).
    """
    inv = np.array([0] + [pow(c, l - 2, l) for c in range(1, l)], dtype=np.int64)
    orig = np.concatenate([supports, coeffs], axis=1)
    rows = np.arange(len(orig))
    minimal = np.ones(len(orig), dtype=bool)
    stab = np.zeros(len(orig), dtype=np.int64)
    for perm in perms:
        img = perm[supports]
        order = np.argsort(img, axis=1)
        img = np.take_along_axis(img, order, axis=1)
        c = np.take_along_axis(coeffs, order, axis=1)
        c = (c * inv[c[:, :1]]) % l
        diff = np.concatenate([img, c], axis=1) - orig
        nz = diff != 0
        first = nz.argmax(axis=1)
        same = ~nz.any(axis=1)
        minimal &= same | (diff[rows, first] > 0)
        stab += same
    return np.where(minimal, len(perms) * (l - 1) // np.maximum(stab, 1), 0)


def _iter_orbit_boundaries(G, n, l, K, config, start=0, stop=None):
    """Like _iter_boundaries over orbit representatives, yielding (dict, orbit size) pairs."""
    perms = _tuple_permutations(G, n)
    for idx, supports, coeffs in _chain_batches(G.order ** n, l, K, True, start, stop):
        w = _orbit_weights(perms, l, supports, coeffs)
        keep = w > 0
        supports, coeffs, w = supports[keep], coeffs[keep], w[keep]
        mask = _boundary_mask(G, n, l, config, supports, coeffs)
        yield idx, [(dict(zip(s.tolist(), c.tolist())), int(k))
                    for s, c, k in zip(supports[mask], coeffs[mask], w[mask])]


@dataclass
class IsopResult:
    K: int
    value: int
    mode: str                    # exhaustive | sampled
    census: int                  # chains examined
    boundaries: int              # boundaries of size K among them
    exact: bool                  # every filler norm certified minimal
    witness: Chain | None = None # a boundary attaining the value

    @property
    def lower_bound(self) -> bool:
        return self.mode == "sampled"

    def to_dict(self) -> dict:
        return {"K": self.K, "value": self.value, "mode": self.mode, "census": self.census,
                "boundaries": self.boundaries, "exact": self.exact,
                "lower_bound": self.lower_bound,
                "witness": None if self.witness is None else self.witness.to_dict()}


def _census_range(args):
    spec, n, l, K, config, start, stop = args
    G = build_group(spec, config)
    return _scan(G, n, l, K, config, start, stop, None)


def _scan(G, n, l, K, config, start, stop, checkpoint):
    ctx = _filling(G, n, l, config)
    best, best_b, exact, count = 0, None, True, 0
    state = {"index": start}
    since = 0
    if checkpoint is not None and checkpoint[0].exists():
        saved = json.loads(checkpoint[0].read_text())
        if saved.get("key") == checkpoint[1]:
            state["index"] = start = saved["index"]
            best, exact, count = saved["value"], saved["exact"], saved["boundaries"]
            best_b = saved.get("witness")
    basis = TupleBasis(G, n)
    for idx, bs in _iter_orbit_boundaries(G, n, l, K, config, start, stop):
        for b, orbit in bs:
            size, _, ok, _ = ctx.fill(b, config)
            exact &= ok
            count += orbit
            if size > best:
                best, best_b = size, [[c, list(basis.tuple_at(i))] for i, c in sorted(b.items())]
        since += (idx - state["index"]) * (l - 1) ** K
        state["index"] = idx
        if checkpoint is not None and since >= config.checkpoint_every:
            since = 0
            _write_checkpoint(checkpoint, idx, best, exact, count, best_b)
    if checkpoint is not None:
        _write_checkpoint(checkpoint, state["index"], best, exact, count, best_b)
    return best, best_b, exact, count


def _write_checkpoint(checkpoint, idx, best, exact, count, witness):
    path, key = checkpoint
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps({"key": key, "index": idx, "value": best, "exact": exact,
                               "boundaries": count, "witness": witness}, sort_keys=True))
    os.replace(tmp, path)


def isop(G: FiniteGroup, n: int, l: int, K: int, mode: str = "exhaustive",
         sample_count: int | None = None, seed: int | None = None,
         config: RunConfig = DEFAULT) -> IsopResult:
    """isop(K): the largest filler norm among boundaries of size exactly K (0 if none).

    Filler norms are invariant under scalars and under automorphisms of G,
    so exhaustive mode fills one representative per orbit and weights the
    boundary count by orbit size; the census size reported is the full one.
    """
    check_modulus(l)
    if K < 0:
        raise PreconditionError("K must be >= 0")
    seed = config.seed if seed is None else seed
    if mode == "sampled":
        return _isop_sampled(G, n, l, K, sample_count, seed, config)
    if mode != "exhaustive":
        raise PreconditionError(f"unknown mode {mode!r}")
    enumerate_tuples(G, n, config)
    total = census_size(G, n, l, K)
    if total > config.max_census:
        raise CapExceeded(f"census of {total} size-{K} chains exceeds cap {config.max_census}")
    if K == 0:
        return IsopResult(0, 0, "exhaustive", 1, 1, True, Chain(G, n, l))
    supports = math.comb(G.order ** n, K)
    if config.threads > 1 and config.checkpoint is None:
        cuts = np.linspace(0, supports, config.threads + 1).astype(int).tolist()
        jobs = [(G.key, n, l, K, config, a, b) for a, b in zip(cuts, cuts[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(_census_range, jobs))
    else:
        ck = None
        if config.checkpoint:
            ck = (Path(config.checkpoint), f"isop-orbits:{G.key}:{n}:{l}:{K}")
        parts = [_scan(G, n, l, K, config, 0, None, ck)]
    best, witness, exact, count = 0, None, True, 0
    for value, w, ok, c in parts:  # merge by max; first attaining part wins ties
        exact &= ok
        count += c
        if value > best:
            best, witness = value, w
    wchain = None if witness is None else Chain(G, n, l, [(c, tuple(t)) for c, t in witness])
    return IsopResult(K, best, "exhaustive", total, count, exact, wchain)


def _isop_sampled(G, n, l, K, sample_count, seed, config) -> IsopResult:
    if not sample_count or sample_count <= 0:
        raise PreconditionError("sampled mode needs a positive sample_count")
    ctx = _filling(G, n, l, config)
    best, witness, exact, count = 0, None, True, 0
    rng = np.random.default_rng(seed)
    for s in rng.integers(0, 2**63 - 1, size=sample_count):
        c = random_chain(G, n, l, K, int(s))
        if not is_cycle(c):
            continue
        b = _as_dict(c)
        out = ctx.fill(b, config)
        if out is None:
            continue
        count += 1
        exact &= out[2]
        if out[0] > best:
            best, witness = out[0], c
    return IsopResult(K, best, "sampled", sample_count, count, exact, witness)


@dataclass
class IsopProfile:
    results: list[IsopResult]

    @property
    def values(self) -> list[int]:
        return [r.value for r in self.results]

    def k1(self, K: int) -> int:
        """max{isop(1), ..., isop(2K)}: the filler bound for differences of two size-K cycles."""
        if 2 * K >= len(self.results):
            raise PreconditionError(f"profile stops at K={len(self.results) - 1}, need {2 * K}")
        return max(self.values[1:2 * K + 1], default=0)

    def to_dict(self) -> dict:
        out = {"values": self.values, "results": [r.to_dict() for r in self.results]}
        half = (len(self.results) - 1) // 2
        out["K1"] = {str(K): self.k1(K) for K in range(half + 1)}
        return out


def isop_profile(G: FiniteGroup, n: int, l: int, K_max: int, mode: str = "exhaustive",
                 sample_count: int | None = None, seed: int | None = None,
                 config: RunConfig = DEFAULT) -> IsopProfile:
    return IsopProfile([isop(G, n, l, K, mode, sample_count, seed, config)
                        for K in range(K_max + 1)])


# ---------------------------------------------------------------------------
# first-order sentences

def has_filler_of_size(b: Chain | dict, size: int, G: FiniteGroup, n: int, l: int,
                       config: RunConfig = DEFAULT) -> bool:
    """Whether some (n+1)-chain with exactly ``size`` nonzero coefficients fills ``b``."""
    ctx = _filling(G, n, l, config)
    bd = _as_dict(b) if isinstance(b, Chain) else b
    out = ctx.fill(bd, config)
    if out is None:
        return False
    f, _, ok, _ = out
    if ok and f > size:
        return False
    if f == size:
        return True
    # a lighter filler is known; look for an exact-size one by enumeration
    cols = G.order ** (n + 1)
    total = census_size(G, n + 1, l, size)
    if total > config.max_census:
        raise CapExceeded(f"exact-size filler census of {total} chains exceeds cap "
                          f"{config.max_census}")
    target = np.zeros(ctx.rows, dtype=np.int64)
    for i, c in bd.items():
        target[i] = c
    D = ctx.D.csc
    for _, supports, coeffs in _chain_batches(cols, l, size, normalized=False):
        img = np.asarray(D @ _dense(cols, supports, coeffs)) % l
        if (img == target[:, None]).all(axis=0).any():
            return True
    return False


@dataclass
class PhiResult:
    holds: bool
    boundaries: int              # size-K boundaries examined
    premise: int                 # of those, how many have a size-K1 filler
    counterexample: Chain | None = None

    def to_dict(self) -> dict:
        return {"holds": self.holds, "boundaries": self.boundaries, "premise": self.premise,
                "counterexample": None if self.counterexample is None
                else self.counterexample.to_dict()}


def check_phi(G: FiniteGroup, n: int, l: int, K: int, K1: int, K2: int,
              config: RunConfig = DEFAULT) -> PhiResult:
    """Every size-K boundary with a filler of size exactly K1 has filler norm <= K2."""
    total = census_size(G, n, l, K)
    if total > config.max_census:
        raise CapExceeded(f"census of {total} size-{K} chains exceeds cap {config.max_census}")
    ctx = _filling(G, n, l, config)
    basis = TupleBasis(G, n)
    seen = premise = 0
    bases = [(0, [{}])] if K == 0 else _iter_boundaries(G, n, l, K, config)
    for _, bs in bases:
        for b in bs:
            seen += 1
            if not has_filler_of_size(b, K1, G, n, l, config):
                continue
            premise += 1
            f, _, ok, _ = ctx.fill(b, config)
            if f <= K2:
                continue
            if not ok and ctx.solver.within(b, K2, config.search_nodes) is not None:
                continue
            bad = Chain(G, n, l, {basis.tuple_at(i): c for i, c in b.items()}, _trusted=True)
            return PhiResult(False, seen, premise, bad)
    return PhiResult(True, seen, premise)


@dataclass
class PsiResult:
    holds: bool
    tuple_length: int            # |H| + 1 with |H| = l ** H_bound
    cycles: int                  # cycles of size <= K
    classes: int                 # homology classes they represent
    spread: int                  # largest set of pairwise far-apart cycles within one class
    witnesses: list[Chain] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "tuple_length": self.tuple_length, "cycles": self.cycles,
                "classes": self.classes, "spread": self.spread,
                "witnesses": [w.to_dict() for w in self.witnesses]}


def _cycles_up_to(G, n, l, K, config):
    """All cycles of size <= K as (size, dict) pairs, every coefficient pattern included."""
    N = G.order ** n
    total = sum(census_size(G, n, l, k) for k in range(K + 1))
    if total > config.max_census:
        raise CapExceeded(f"census of {total} chains of size <= {K} exceeds cap {config.max_census}")
    out = [{}]
    D = boundary_matrix(G, n, l, config).csc if n >= 1 else None
    for k in range(1, K + 1):
        for _, supports, coeffs in _chain_batches(N, l, k, normalized=False):
            if D is not None:
                keep = ~(np.asarray(D @ _dense(N, supports, coeffs)) % l).any(axis=0)
                supports, coeffs = supports[keep], coeffs[keep]
            out.extend(dict(zip(s.tolist(), c.tolist())) for s, c in zip(supports, coeffs))
    return out


def check_psi(G: FiniteGroup, n: int, l: int, K: int, K1: int, H_bound: int,
              config: RunConfig = DEFAULT) -> PsiResult:
    """Among any l**H_bound + 1 cycles of size <= K, two differ by a boundary of a size-<=K1 chain.

    Fails exactly when some family of that many cycles is pairwise either
    non-homologous or more than K1 apart; the largest such family picks,
    in every class, a maximum set of pairwise far-apart members.
    """
    length = l ** H_bound + 1
    H = homology(G, n, l, config, minimize=False)
    cycles = _cycles_up_to(G, n, l, K, config)
    N = G.order ** n
    Z = np.zeros((len(cycles), N), dtype=np.int64)
    for r, c in enumerate(cycles):
        for i, v in c.items():
            Z[r, i] = v
    coords = [tuple(H.coordinates(z).tolist()) for z in Z]
    classes: dict[tuple, list[int]] = {}
    for r, a in enumerate(coords):
        classes.setdefault(a, []).append(r)
    basis = TupleBasis(G, n)

    def chain(r):
        return Chain(G, n, l, {basis.tuple_at(i): v for i, v in cycles[r].items()}, _trusted=True)

    ordered = sorted(classes.items())
    if len(ordered) >= length:
        return PsiResult(False, length, len(cycles), len(ordered), 1,
                         [chain(members[0]) for _, members in ordered[:length]])
    ctx = _filling(G, n, l, config)
    pairs = sum(len(m) * (len(m) - 1) // 2 for _, m in ordered)
    if pairs > config.max_census:
        raise CapExceeded(f"{pairs} same-class pairs exceed cap {config.max_census}")
    picks, spread = [], 1
    for _, members in ordered:
        far = nx.Graph()
        far.add_nodes_from(members)
        for a, b in itertools.combinations(members, 2):
            diff = {i: v for i, v in ((i, (cycles[a].get(i, 0) - cycles[b].get(i, 0)) % l)
                                      for i in set(cycles[a]) | set(cycles[b])) if v}
            if not ctx.within(diff, K1, config.search_nodes):
                far.add_edge(a, b)
        if far.number_of_edges():
            clique, _ = nx.max_weight_clique(far, weight=None)
            clique = sorted(clique)
        else:
            clique = [members[0]]
        spread = max(spread, len(clique))
        picks.extend(clique)
    holds = len(picks) < length
    return PsiResult(holds, length, len(cycles), len(ordered), spread,
                     [] if holds else [chain(r) for r in picks[:length]])


# ---------------------------------------------------------------------------
# degree-1 commutator cross-check

def commutator_report(G: FiniteGroup, l: int, config: RunConfig = DEFAULT) -> list[dict]:
    """filler_norm(<g>) next to the commutator length, for every g in [G, G]."""
    rows = []
    for g in sorted(derived_subgroup(G)):
        c = Chain(G, 1, l, {(g,): 1})
        f = filler_norm(c, config)
        rows.append({"element": g, "label": G.label(g),
                     "commutator_length": commutator_length(G, g),
                     "filler_norm": f.filler_size, "exact": f.exact})
    return rows
