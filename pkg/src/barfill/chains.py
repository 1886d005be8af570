"""Sparse chains of the bar complex with GF(l) coefficients.

A degree-n chain is a finite formal combination of n-tuples of group
elements.  The differential is

    d<g1,...,gn> = <g2,...,gn> + sum_{i=1}^{n-1} (-1)^i <g1,...,g_i g_{i+1},...,gn>
                   + (-1)^n <g1,...,g_{n-1}>

so d<g> = <> - <> = 0 and d is total on degree >= 1.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import CapExceeded, PreconditionError
from .field import is_prime
from .groups import FiniteGroup, build_group

Tuple = tuple[int, ...]


@lru_cache(maxsize=None)
def check_modulus(l: int) -> int:
    if not is_prime(l):
        raise PreconditionError(f"coefficient modulus l={l} is not prime")
    return l


class Chain:
    """An immutable element of C_n(G; Z/l).

    ``terms`` may be a mapping ``tuple -> coefficient`` or an iterable of
    ``(coefficient, tuple)`` pairs; repeated tuples are summed, coefficients
    reduced mod l and zeros dropped.
    """

    __slots__ = ("group", "n", "l", "_terms")

    def __init__(self, group: FiniteGroup, n: int, l: int, terms=None, *, _trusted=False):
        self.group = group
        self.n = n
        self.l = l
        if _trusted:
            self._terms = terms
            return
        if n < 0:
            raise PreconditionError("chain degree must be >= 0")
        check_modulus(l)
        acc: dict[Tuple, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else (
            ((tuple(t), c) for c, t in terms) if terms is not None else ())
        order = group.order
        for t, c in items:
            t = tuple(int(x) for x in t)
            if len(t) != n or any(x < 0 or x >= order for x in t):
                raise PreconditionError(f"tuple {t} is not a valid degree-{n} basis element")
            acc[t] = (acc.get(t, 0) + int(c)) % l
        self._terms = {t: c for t, c in acc.items() if c}

    # basic protocol -------------------------------------------------------
    def __repr__(self) -> str:
        body = " + ".join(f"{c}*<{','.join(map(str, t))}>" for t, c in self.terms()) or "0"
        return f"Chain[{self.group.key}, n={self.n}, l={self.l}]({body})"

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Chain) and self.group == other.group and self.n == other.n
                and self.l == other.l and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.group.key, self.n, self.l, frozenset(self._terms.items())))

    def coeff(self, t: Tuple) -> int:
        return self._terms.get(tuple(t), 0)

    def terms(self) -> list[tuple[Tuple, int]]:
        """``(tuple, coefficient)`` pairs in canonical (lexicographic tuple) order."""
        return sorted(self._terms.items())

    def support(self) -> list[Tuple]:
        return sorted(self._terms)

    def coefficients(self) -> tuple[int, ...]:
        """Ordered coefficient tuple of the canonical expansion."""
        return tuple(c for _, c in self.terms())

    def is_zero(self) -> bool:
        return not self._terms

    # module structure ----------------------------------------------------
    def _check_compatible(self, other: "Chain") -> None:
        if self.group != other.group or self.n != other.n or self.l != other.l:
            raise PreconditionError(
                f"incompatible chains: ({self.group.key}, {self.n}, {self.l}) vs "
                f"({other.group.key}, {other.n}, {other.l})")

    def combine(self, other: "Chain", s: int = 1) -> "Chain":
        """self + s*other."""
        self._check_compatible(other)
        l = self.l
        s %= l
        out = dict(self._terms)
        if s:
            for t, c in other._terms.items():
                v = (out.get(t, 0) + s * c) % l
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return Chain(self.group, self.n, l, out, _trusted=True)

    def __add__(self, other: "Chain") -> "Chain":
        return self.combine(other, 1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self.combine(other, -1)

    def __neg__(self) -> "Chain":
        return self.scale(-1)

    def scale(self, s: int) -> "Chain":
        s %= self.l
        if not s:
            return Chain(self.group, self.n, self.l, {}, _trusted=True)
        return Chain(self.group, self.n, self.l,
                     {t: c * s % self.l for t, c in self._terms.items()}, _trusted=True)

    def normalized(self) -> "Chain":
        """Scalar multiple whose first canonical coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        first = self.terms()[0][1]
        return self.scale(pow(first, -1, self.l))

    def map_tuples(self, images: np.ndarray, target: FiniteGroup) -> "Chain":
        """Push forward along an element map ``images`` (index array into ``target``)."""
        return Chain(target, self.n, self.l,
                     [(c, tuple(int(images[g]) for g in t)) for t, c in self._terms.items()])

    # serialisation -----------------------------------------------------------
    def to_dict(self) -> dict:
        return {"group": self.group.key, "n": self.n, "l": self.l,
                "terms": [[c, list(t)] for t, c in self.terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict, group: FiniteGroup | None = None,
                  config: RunConfig = DEFAULT) -> "Chain":
        if group is None:
            group = build_group(data["group"], config)
        elif group.key != data["group"]:
            raise PreconditionError(f"chain is over {data['group']}, not {group.key}")
        return cls(group, int(data["n"]), int(data["l"]),
                   [(int(c), tuple(t)) for c, t in data["terms"]])

    @classmethod
    def from_json(cls, text: str, group: FiniteGroup | None = None,
                  config: RunConfig = DEFAULT) -> "Chain":
        return cls.from_dict(json.loads(text), group, config)

    # dense coordinates ---------------------------------------------------------
    def to_vector(self) -> np.ndarray:
        basis = enumerate_tuples(self.group, self.n)
        v = np.zeros(basis.size, dtype=np.int64)
        for t, c in self._terms.items():
            v[basis.index(t)] = c
        return v

    @classmethod
    def from_vector(cls, group: FiniteGroup, n: int, l: int, v) -> "Chain":
        basis = enumerate_tuples(group, n)
        v = np.asarray(v, dtype=np.int64) % l
        nz = np.flatnonzero(v)
        digits = basis.digits(nz)
        return cls(group, n, l, {tuple(map(int, d)): int(v[i]) for d, i in zip(digits, nz)},
                   _trusted=True)


def zero_chain(group: FiniteGroup, n: int, l: int) -> Chain:
    return Chain(group, n, l)


def basis_chain(group: FiniteGroup, t: Iterable[int], l: int, coeff: int = 1) -> Chain:
    t = tuple(t)
    return Chain(group, len(t), l, [(coeff, t)])


def chain_size(c: Chain) -> int:
    """Number of tuples carrying a nonzero coefficient."""
    return len(c)


def chain_combine(a: Chain, b: Chain, s: int = 1) -> Chain:
    return a.combine(b, s)


def faces(G: FiniteGroup, t: Tuple) -> list[tuple[int, Tuple]]:
    """The n+1 signed faces (sign, tuple) of a basis tuple of degree n >= 1."""
    n = len(t)
    out = [(1, t[1:])]
    for i in range(1, n):
        out.append(((-1) ** i, t[:i - 1] + (G.mul(t[i - 1], t[i]),) + t[i + 1:]))
    out.append(((-1) ** n, t[:-1]))
    return out


def boundary(c: Chain) -> Chain:
    """The bar differential d_n applied to a chain of degree n >= 1."""
    if c.n < 1:
        raise PreconditionError("the boundary of a degree-0 chain is not defined")
    G, l = c.group, c.l
    acc: dict[Tuple, int] = {}
    for t, coeff in c._terms.items():
        for sign, f in faces(G, t):
            acc[f] = (acc.get(f, 0) + sign * coeff) % l
    return Chain(G, c.n - 1, l, {t: v for t, v in acc.items() if v}, _trusted=True)


class TupleBasis:
    """Lexicographic bijection between G^n and 0..|G|^n - 1 (leftmost entry most significant)."""

    def __init__(self, group: FiniteGroup, n: int):
        self.group = group
        self.n = n
        self.base = group.order
        self.size = group.order ** n
        self._weights = np.array([self.base ** (n - 1 - i) for i in range(n)], dtype=np.int64)

    def __len__(self) -> int:
        return self.size

    def index(self, t: Iterable[int]) -> int:
        i = 0
        for x in t:
            i = i * self.base + int(x)
        return i

    def tuple_at(self, i: int) -> Tuple:
        out = []
        for _ in range(self.n):
            i, r = divmod(i, self.base)
            out.append(r)
        return tuple(reversed(out))

    def digits(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._weights) % self.base

    def encode(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._weights


def enumerate_tuples(group: FiniteGroup, n: int, config: RunConfig = DEFAULT) -> TupleBasis:
    size = group.order ** n
    if size > config.max_tuples:
        raise CapExceeded(f"|G|^n = {group.order}^{n} = {size} exceeds tuple cap {config.max_tuples}")
    return TupleBasis(group, n)


def random_chain(group: FiniteGroup, n: int, l: int, size: int, seed: int) -> Chain:
    """A chain with exactly ``size`` distinct tuples and uniform nonzero coefficients."""
    check_modulus(l)
    total = group.order ** n
    if size < 0 or size > total:
        raise PreconditionError(f"cannot pick {size} distinct tuples out of {total}")
    rng = np.random.default_rng(seed)
    if total <= 1 << 20:
        idx = rng.choice(total, size=size, replace=False)
    else:
        chosen: dict[int, None] = {}
        while len(chosen) < size:
            chosen.setdefault(int(rng.integers(total)))
        idx = np.fromiter(chosen, dtype=np.int64, count=size)
    coeffs = rng.integers(1, l, size=size)
    basis = TupleBasis(group, n)
    digits = basis.digits(idx)
    return Chain(group, n, l, {tuple(map(int, d)): int(c) for d, c in zip(digits, coeffs)},
                 _trusted=True)
