"""Small finite fields GF(p^e) with elements encoded as integers 0..q-1.

An element is the polynomial sum(d_i x^i) whose base-p digits are d_0, d_1, ...
(d_0 least significant).  Arithmetic is table driven: exp/log tables
relative to the smallest primitive element, and a digit table for addition.
All operations accept Python ints or integer numpy arrays.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

ADD_TABLE_MAX_Q = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p**e, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic; coefficient lists are low -> high
    a = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    out = a[:dm]
    return out + [0] * (dm - len(out))


def _is_irreducible(m: list[int], p: int) -> bool:
    e = len(m) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            f = list(low) + [1]
            if not any(_poly_mod(m, f, p)):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over GF(p), ordered by base-p integer value."""
    for code in range(p**e):
        low = [(code // p**i) % p for i in range(e)]
        m = low + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError(f"no irreducible polynomial of degree {e} over GF({p})")


def _out(r):
    r = np.asarray(r)
    return r if r.ndim else int(r)


class FiniteField:
    """GF(p^e) with integer-encoded elements.

    ``modulus`` is the defining polynomial (low -> high coefficients), the
    lexicographically smallest monic irreducible of degree ``e``.
    ``generator`` is the smallest element of multiplicative order q - 1.
    """

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p) or e < 1:
            raise ValueError(f"invalid field parameters p={p}, e={e}")
        self.p = p
        self.e = e
        self.q = q = p**e
        self.modulus = smallest_irreducible(p, e)
        pw = p ** np.arange(e, dtype=np.int64)
        self._digits = (np.arange(q, dtype=np.int64)[:, None] // pw) % p
        self._pw = pw
        self._mul_slow = self._poly_mul if e > 1 else (lambda a, b: a * b % p)
        self.generator, self._exp = self._find_generator()
        self._log = np.zeros(q, dtype=np.int64)
        self._log[self._exp] = np.arange(q - 1, dtype=np.int64)
        if e == 1 or q > ADD_TABLE_MAX_Q:
            self._add_table = None
        else:
            a = np.arange(q)
            self._add_table = self._digit_add(a[:, None], a[None, :])

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, e={self.e})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    def _poly_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da = [(a // p**i) % p for i in range(e)]
        db = [(b // p**i) % p for i in range(e)]
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        r = _poly_mod(prod, list(self.modulus), p)
        return sum(c * p**i for i, c in enumerate(r))

    def _find_generator(self) -> tuple[int, np.ndarray]:
        q = self.q
        if q == 2:
            return 1, np.array([1], dtype=np.int64)
        for g in range(2, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == q - 1:
                return g, np.array(powers, dtype=np.int64)
        raise RuntimeError("multiplicative group is not cyclic?")  # unreachable

    def _digit_add(self, a, b, sign: int = 1):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        d = (self._digits[a] + sign * self._digits[b]) % self.p
        return d @ self._pw

    # arithmetic -----------------------------------------------------------
    def add(self, a, b):
        if self.e == 1:
            r = (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.p
        elif self._add_table is not None:
            r = self._add_table[a, b]
        else:
            r = self._digit_add(a, b)
        return _out(r)

    def neg(self, a):
        if self.e == 1:
            return _out((-np.asarray(a, dtype=np.int64)) % self.p)
        a = np.asarray(a, dtype=np.int64)
        return _out(self._digit_add(np.zeros_like(a), a, sign=-1))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        la = self._log[a_arr]
        lb = self._log[b_arr]
        r = self._exp[(la + lb) % (self.q - 1)]
        r = np.where((a_arr == 0) | (b_arr == 0), 0, r)
        return _out(r)

    def inv(self, a):
        a_arr = np.asarray(a, dtype=np.int64)
        if np.any(a_arr == 0):
            raise ZeroDivisionError("0 has no inverse in a field")
        r = self._exp[(-self._log[a_arr]) % (self.q - 1)]
        return _out(r)

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def root_of_unity(self, m: int) -> int:
        """A primitive m-th root of unity: generator^((q-1)/m).  Requires m | q-1."""
        if (self.q - 1) % m:
            raise ValueError(f"GF({self.q}) has no primitive {m}-th root of unity")
        return self.pow(self.generator, (self.q - 1) // m)
