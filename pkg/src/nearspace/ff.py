"""Finite fields GF(p^m) with exp/log tables.

Elements are integers in ``[0, p**m)``.  The base-p digits of an index are the
coefficients of the residue polynomial, lowest degree first, so index 5 in
GF(3^2) is ``2 + 1*X``.  The prime subfield GF(p) is therefore the indices
``0 .. p-1`` with their usual integer meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DivisionByZero, NotPrime, TooLarge

DEFAULT_ORDER_CAP = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, ``{prime: exponent}``."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` or None if q is not a prime power."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    (p, e), = f.items()
    return p, e


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.m < 1:
            raise ValueError(f"exponent must be >= 1, got {self.m}")

    @property
    def order(self) -> int:
        return self.p**self.m


# -- polynomials over GF(p): coefficient lists, lowest degree first ----------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, p):
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible(f, p):
    # monic f of degree m is irreducible iff no monic factor of degree <= m/2
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def _digits(index, p, m):
    out = []
    for _ in range(m):
        out.append(index % p)
        index //= p
    return out


def _undigits(digits, p):
    index = 0
    for d in reversed(digits):
        index = index * p + d
    return index


class Field:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus.

    Build through :func:`build_field`.  Instances are immutable after
    construction; ``exp[i] = g**i`` for the smallest-index generator ``g`` and
    ``log`` is its inverse on nonzero elements (``log[0]`` is -1).
    """

    def __init__(self, spec: FieldSpec, cap: int = DEFAULT_ORDER_CAP):
        order = spec.order
        if order > cap:
            raise TooLarge(f"field order {order} exceeds cap {cap}")
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.order = order
        self.modulus = self._smallest_irreducible()
        self.generator = self._smallest_generator()
        self.exp, self.log = self._build_tables()

    # construction helpers

    def _smallest_irreducible(self):
        p, m = self.p, self.m
        if m == 1:
            return (0, 1)
        for low in range(p**m):
            f = _digits(low, p, m) + [1]
            if f[0] == 0:
                continue
            if _is_irreducible(f, p):
                return tuple(f)
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover

    def _poly_mulmod(self, a, b):
        return _poly_mod(_poly_mul(a, b, self.p), self.modulus, self.p)

    def _slow_mul(self, a: int, b: int) -> int:
        prod_ = self._poly_mulmod(_digits(a, self.p, self.m), _digits(b, self.p, self.m))
        return _undigits(prod_ + [0] * (self.m - len(prod_)), self.p)

    def _slow_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    def _smallest_generator(self):
        n = self.order - 1
        if n == 1:
            return 1
        primes = list(factorize(n))
        for g in range(2, self.order):
            if all(self._slow_pow(g, n // r) != 1 for r in primes):
                return g
        raise AssertionError("no generator found")  # pragma: no cover

    def _mul_matrix(self, h):
        # row i = digits of X^i * h; digits(a*h) = digits(a) @ M mod p
        rows = [_digits(self._slow_mul(self.p**i, h), self.p, self.m) for i in range(self.m)]
        return np.array(rows, dtype=np.int64)

    def _build_tables(self):
        n = self.order - 1
        weights = self.p ** np.arange(self.m, dtype=np.int64)
        powers = np.zeros((1, self.m), dtype=np.int64)
        powers[0, 0] = 1
        h = self.generator
        # doubling: g^[k, 2k) = g^[0, k) * g^k
        while powers.shape[0] < n:
            block = (powers @ self._mul_matrix(h)) % self.p
            powers = np.vstack([powers, block])
            h = self._slow_mul(h, h)
        exp = (powers[:n] @ weights).tolist()
        log = [-1] * self.order
        for i, a in enumerate(exp):
            log[a] = i
        if sorted(exp) != list(range(1, self.order)):
            raise AssertionError("generator does not span the multiplicative group")
        return exp, log

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        p, out, w = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out, w = self.p, 0, 1
        while a:
            out += ((-(a % p)) % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self.exp[(-self.log[a]) % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("0 raised to a negative power")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def frobenius(self, a: int, j: int = 1) -> int:
        """Return ``a ** (p ** j)``."""
        if a == 0:
            return 0
        n = self.order - 1
        return self.exp[(self.log[a] * pow(self.p, j, n)) % n] if n > 1 else a

    # vectorized helpers for table construction

    def digit_array(self) -> np.ndarray:
        """``(order, m)`` array of base-p digits for every element."""
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.m)], axis=1)

    def add_table(self) -> np.ndarray:
        d = self.digit_array()
        weights = self.p ** np.arange(self.m, dtype=np.int64)
        return (((d[:, None, :] + d[None, :, :]) % self.p) @ weights).astype(_index_dtype(self.order))

    def element_str(self, a: int) -> str:
        terms = []
        for i, c in enumerate(_digits(a, self.p, self.m)):
            if c:
                terms.append(str(c) if i == 0 else f"{'' if c == 1 else c}X" + (f"^{i}" if i > 1 else ""))
        return " + ".join(terms) or "0"

    def __repr__(self):
        return f"Field(GF({self.p}^{self.m}), modulus={self.modulus}, generator={self.generator})"


def _index_dtype(order):
    return np.uint16 if order <= 2**16 else np.uint32


def build_field(spec: FieldSpec, cap: int = DEFAULT_ORDER_CAP) -> Field:
    return Field(spec, cap=cap)


f_add = Field.add
f_mul = Field.mul
f_inv = Field.inv
f_pow = Field.pow
frobenius = Field.frobenius
