"""Indexed families of groups: diagonal embeddings, coordinate decomposition, uniform filler bounds.

A family is a finite list of groups (typically matrix groups over F_q for
several q).  Statements that hold "for most indices" are rendered by
plurality: the most frequent coefficient pattern wins and the dissenting
indices are always reported.

Boundary recipes
----------------
``asymp_probe`` evaluates a small recipe language at every index::

    recipe := term (('+' | '-') term)*
    term   := [INT '*'] ( '[' word (',' word)* ']' | 'd(' recipe ')' )
    word   := factor ('.' factor)*
    factor := ('e' | 't' INT | 'r' INT) ['^' INT]

``e`` is the identity, ``t<i>`` the diagonal matrix with the field's
primitive element at coordinate i (1 elsewhere) and ``r<i>`` the same with a
primitive l-th root of unity.  ``[w1,...,wk]`` is a bar tuple and ``d(...)``
applies the differential.  Example: ``d([t0,t0^2])`` or ``[r0]-[r0^2]``.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .chains import Chain, boundary, check_modulus
from .config import DEFAULT, RunConfig
from .errors import CapExceeded, PreconditionError, SpecError
from .field import prime_power
from .groups import FiniteGroup, build_group, parse_spec
from .homology import is_boundary
from .isoperimetry import FillerResult, filler_norm


@dataclass
class GroupFamily:
    members: list[tuple[str, str]]     # (index label, group spec)
    n: int
    l: int

    def __post_init__(self):
        check_modulus(self.l)
        labels = [m[0] for m in self.members]
        if len(set(labels)) != len(labels):
            raise PreconditionError("family labels must be distinct")
        for _, spec in self.members:
            parse_spec(spec)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> list[str]:
        return [m[0] for m in self.members]

    def groups(self, config: RunConfig = DEFAULT) -> list[FiniteGroup]:
        return [build_group(spec, config) for _, spec in self.members]

    @classmethod
    def over_prime_powers(cls, template: str, qs, n: int, l: int,
                          mod_filter: bool = False) -> "GroupFamily":
        """``template`` like ``gl:2`` or ``torus:1``; one member per prime power q.

        With ``mod_filter`` only q = 1 (mod l) is kept.
        """
        members = []
        for q in qs:
            if prime_power(q) is None or (mod_filter and q % l != 1):
                continue
            members.append((str(q), f"{template}:{q}"))
        return cls(members, n, l)


# ---------------------------------------------------------------------------
# embeddings

def check_homomorphism(B: FiniteGroup, G: FiniteGroup, images, samples: int = 1000,
                       seed: int = 0) -> None:
    """All pairs for |B| <= 256, otherwise ``samples`` random pairs."""
    images = np.asarray(images, dtype=np.int64)
    if images.shape != (B.order,):
        raise PreconditionError("embedding must give one image per element")
    if B.order <= 256:
        a, b = np.meshgrid(np.arange(B.order), np.arange(B.order), indexing="ij")
        a, b = a.ravel(), b.ravel()
    else:
        rng = np.random.default_rng(seed)
        a, b = rng.integers(0, B.order, samples), rng.integers(0, B.order, samples)
    if not (images[B.mul_array(a, b)] == G.mul_array(images[a], images[b])).all():
        raise PreconditionError(f"map {B.key} -> {G.key} is not a homomorphism")


def cyclic_embedding(m: int, G: FiniteGroup, coordinate: int = 0) -> np.ndarray:
    """Z/m -> G sending 1 to the diagonal matrix with a primitive m-th root of unity at ``coordinate``."""
    if G.field is None:
        raise PreconditionError(f"{G.key} is not a matrix group")
    try:
        zeta = G.field.root_of_unity(m)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    diag = [1] * G.degree
    diag[coordinate] = zeta
    gen = G.index_of_matrix(np.diag(diag))
    if gen < 0:
        raise PreconditionError(f"diagonal matrix {diag} is not in {G.key}")
    out = [G.identity]
    for _ in range(m - 1):
        out.append(G.mul(out[-1], gen))
    return np.array(out, dtype=np.int64)


def diagonal_embed(c: Chain, groups: list[FiniteGroup], embeddings: list[np.ndarray],
                   check: bool = True) -> list[Chain]:
    """Entrywise image of ``c`` in every member group."""
    if len(groups) != len(embeddings):
        raise PreconditionError("one embedding per family member is required")
    out = []
    for G, emb in zip(groups, embeddings):
        if check:
            check_homomorphism(c.group, G, emb)
        out.append(c.map_tuples(np.asarray(emb), G))
    return out


def image_order(c: Chain, embedding) -> dict[tuple, int]:
    """Rank of each image tuple by the canonical order of its preimage."""
    emb = np.asarray(embedding)
    return {tuple(int(emb[g]) for g in t): k for k, (t, _) in enumerate(c.terms())}


# ---------------------------------------------------------------------------
# coordinates

@dataclass
class CooDecomposition:
    t0: tuple[int, ...]                          # plurality coefficient pattern
    members: list[int]                           # indices with pattern t0
    tuples: list[list[tuple[int, ...]]]          # ordered support per index
    patterns: list[tuple[int, ...]]              # coefficient pattern per index
    dissent: list[int]

    def to_dict(self, labels=None) -> dict:
        name = (lambda i: labels[i]) if labels else (lambda i: i)
        return {"t0": list(self.t0), "members": [name(i) for i in self.members],
                "dissent": [name(i) for i in self.dissent],
                "patterns": [list(p) for p in self.patterns],
                "tuples": [[list(t) for t in ts] for ts in self.tuples]}


def coordinate_decompose(chains: list[Chain], K: int, order_keys=None) -> CooDecomposition:
    """Split a bounded family into a plurality coefficient pattern and per-index tuples.

    Each chain is listed in canonical tuple order, or by ``order_keys[i]``
    (a mapping tuple -> rank) when given.  Ties between equally frequent
    patterns go to the lexicographically smallest.
    """
    tuples, patterns = [], []
    for i, c in enumerate(chains):
        if len(c) > K:
            raise PreconditionError(f"chain {i} has size {len(c)} > K = {K}")
        terms = c.terms()
        if order_keys is not None and order_keys[i] is not None:
            terms = sorted(terms, key=lambda tc, k=order_keys[i]: k[tc[0]])
        tuples.append([t for t, _ in terms])
        patterns.append(tuple(v for _, v in terms))
    if not chains:
        return CooDecomposition((), [], [], [], [])
    counts = Counter(patterns)
    top = max(counts.values())
    t0 = min(p for p, k in counts.items() if k == top)
    members = [i for i, p in enumerate(patterns) if p == t0]
    dissent = [i for i, p in enumerate(patterns) if p != t0]
    return CooDecomposition(t0, members, tuples, patterns, dissent)


def reconstruct(decomp: CooDecomposition, base: FiniteGroup, embeddings, n: int,
                l: int) -> dict[int, Chain]:
    """Pull each member's tuples back along its embedding and reattach t0."""
    out = {}
    for i in decomp.members:
        emb = np.asarray(embeddings[i])
        inverse = {int(x): g for g, x in enumerate(emb)}
        try:
            pulled = [tuple(inverse[x] for x in t) for t in decomp.tuples[i]]
        except KeyError:
            raise PreconditionError(f"index {i} has a tuple outside the embedded image") from None
        out[i] = Chain(base, n, l, list(zip(decomp.t0, pulled)))
    return out


# ---------------------------------------------------------------------------
# condition (star)

@dataclass
class FamilyReport:
    labels: list[str]
    orders: list[int]
    results: list[FillerResult | None]            # None where the index was skipped
    failures: dict[str, str] = field(default_factory=dict)
    K: int = 0

    @property
    def max_filler(self) -> int:
        return max((r.filler_size for r in self.results if r is not None), default=0)

    @property
    def star_verdict(self) -> str:
        if self.failures:
            return "mixed"
        if all(r.exact for r in self.results if r is not None):
            return "bounded"
        return "exceeded-budget"

    @property
    def growth_suspected(self) -> bool:
        vals = [r.filler_size for r in self.results if r is not None and r.exact]
        return len(vals) >= 3 and vals[-3] < vals[-2] < vals[-1]

    def table(self) -> list[dict]:
        return [{"q": lab, "group_order": o,
                 "filler": None if r is None else r.filler_size,
                 "exact": None if r is None else r.exact}
                for lab, o, r in zip(self.labels, self.orders, self.results)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "group_order", "filler", "exact"])
        for row in self.table():
            if row["filler"] is not None:
                w.writerow([row["q"], row["group_order"], row["filler"],
                            str(row["exact"]).lower()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"K": self.K, "max_filler": self.max_filler, "star_verdict": self.star_verdict,
                "growth_suspected": self.growth_suspected, "failures": self.failures,
                "table": self.table(),
                "results": [None if r is None else r.to_dict() for r in self.results]}


def check_star(family: GroupFamily, boundaries: list[Chain],
               config: RunConfig = DEFAULT) -> FamilyReport:
    """Filler norms of one boundary per index and whether they are uniformly bounded."""
    if len(boundaries) != len(family):
        raise PreconditionError("one boundary per family member is required")
    results, orders = [], []
    for (label, _), b in zip(family.members, boundaries):
        if not is_boundary(b, config=config):
            raise PreconditionError(f"member {label}: chain is not a boundary")
        results.append(filler_norm(b, config))
        orders.append(b.group.order)
    K = max((len(b) for b in boundaries), default=0)
    return FamilyReport(family.labels, orders, results, {}, K)


# ---------------------------------------------------------------------------
# recipes

class RecipeError(SpecError):
    pass


_TOKEN = re.compile(r"\s*(d\(|\d+|[\[\](),.^*+\-]|[etr])")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RecipeError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Recipe:
    """Parsed recipe; ``evaluate`` builds the chain inside one group."""

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.tree = self._sum()
        if self.i != len(self.toks):
            raise RecipeError(f"trailing input in recipe {text!r}")

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _take(self, expect=None):
        tok = self._peek()
        if tok is None or (expect is not None and tok != expect):
            raise RecipeError(f"expected {expect or 'token'} in recipe {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def _sum(self):
        terms = [(1, self._term())]
        while self._peek() in ("+", "-"):
            sign = 1 if self._take() == "+" else -1
            terms.append((sign, self._term()))
        return ("sum", terms)

    def _term(self):
        coeff = 1
        if self._peek() and self._peek().isdigit():
            coeff = int(self._take())
            self._take("*")
        tok = self._take()
        if tok == "d(":
            inner = self._sum()
            self._take(")")
            return ("scale", coeff, ("d", inner))
        if tok != "[":
            raise RecipeError(f"expected '[' or 'd(' in recipe {self.text!r}")
        words = [self._word()]
        while self._peek() == ",":
            self._take()
            words.append(self._word())
        self._take("]")
        return ("scale", coeff, ("tuple", words))

    def _word(self):
        factors = [self._factor()]
        while self._peek() == ".":
            self._take()
            factors.append(self._factor())
        return factors

    def _factor(self):
        kind = self._take()
        if kind not in ("e", "t", "r"):
            raise RecipeError(f"unknown generator {kind!r} in recipe {self.text!r}")
        coord = 0 if kind == "e" else int(self._take())
        power = 1
        if self._peek() == "^":
            self._take()
            power = int(self._take())
        return kind, coord, power

    # evaluation ----------------------------------------------------------------
    def evaluate(self, G: FiniteGroup, l: int) -> Chain:
        return self._eval(self.tree, G, l)

    def _element(self, G, l, kind, coord, power):
        if kind == "e":
            return G.identity
        if G.field is None:
            raise RecipeError(f"{G.key} has no diagonal generators")
        if coord >= G.degree:
            raise RecipeError(f"coordinate {coord} out of range for {G.key}")
        F = G.field
        try:
            x = F.generator if kind == "t" else F.root_of_unity(l)
        except ValueError as exc:
            raise RecipeError(str(exc)) from None
        diag = [1] * G.degree
        diag[coord] = F.pow(x, power)
        g = G.index_of_matrix(np.diag(diag))
        if g < 0:
            raise RecipeError(f"diagonal matrix {diag} is not in {G.key}")
        return g

    def _eval(self, node, G, l):
        tag = node[0]
        if tag == "sum":
            parts = [(s, self._eval(t, G, l)) for s, t in node[1]]
            degrees = {c.n for _, c in parts}
            if len(degrees) != 1:
                raise RecipeError(f"terms of mixed degree in recipe {self.text!r}")
            acc = parts[0][1].scale(parts[0][0])
            for s, c in parts[1:]:
                acc = acc.combine(c, s)
            return acc
        if tag == "scale":
            return self._eval(node[2], G, l).scale(node[1])
        if tag == "d":
            inner = self._eval(node[1], G, l)
            if inner.n < 1:
                raise RecipeError("d() applied to a degree-0 chain")
            return boundary(inner)
        entries = []
        for word in node[1]:
            g = G.identity
            for f in word:
                g = G.mul(g, self._element(G, l, *f))
            entries.append(g)
        return Chain(G, len(entries), l, [(1, tuple(entries))])


def parse_recipe(text: str) -> _Recipe:
    return _Recipe(text)


def asymp_probe(family: GroupFamily, recipe: str, K: int | None = None,
                config: RunConfig = DEFAULT) -> FamilyReport:
    """Evaluate ``recipe`` at every index and fill it; failing indices are skipped and reported."""
    rec = parse_recipe(recipe)
    labels, orders, results, failures = [], [], [], {}
    for label, spec in family.members:
        G = build_group(spec, config)
        labels.append(label)
        orders.append(G.order)
        try:
            b = rec.evaluate(G, family.l)
            if b.n != family.n:
                raise RecipeError(f"recipe has degree {b.n}, family degree is {family.n}")
            if K is not None and len(b) > K:
                raise RecipeError(f"recipe chain has size {len(b)} > K = {K}")
            if not is_boundary(b, config=config):
                raise RecipeError("recipe chain is not a boundary")
            results.append(filler_norm(b, config))
        except RecipeError as exc:
            failures[label] = str(exc)
            results.append(None)
        except CapExceeded as exc:
            failures[label] = f"refused: {exc}"
            results.append(None)
    bound = K if K is not None else max((len(r.chain) for r in results if r), default=0)
    return FamilyReport(labels, orders, results, failures, bound)
