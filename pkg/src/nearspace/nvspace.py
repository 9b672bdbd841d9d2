"""Vectors of R^n, the right scalar action and canonical R-subgroups.

Vectors are plain tuples of element indices.  Coordinates are 0-based
throughout the library.  An R-subgroup is stored in canonical form: a direct
sum of blocks ``u_i R`` where the ``u_i`` have disjoint supports, each block
pivot is the smallest coordinate of its support with value 1, and blocks are
sorted by pivot.  Two canonical forms are equal iff the subgroups are.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import DimensionMismatch, NotAMember, TooLarge

Vector = tuple

DEFAULT_ENUMERATION_CAP = 10**6


def zero_vector(n: int) -> Vector:
    return (0,) * n


def unit_vector(n: int, j: int, value: int = 1) -> Vector:
    v = [0] * n
    v[j] = value
    return tuple(v)


def support(v) -> list[int]:
    return [i for i, x in enumerate(v) if x]


def weight(v) -> int:
    return sum(1 for x in v if x)


def _check_dims(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"dimension {len(x)} != {len(y)}")


def vec_add(N, x, y) -> Vector:
    _check_dims(x, y)
    add = N.add
    return tuple(add(a, b) for a, b in zip(x, y))


def vec_neg(N, x) -> Vector:
    return tuple(N.neg(a) for a in x)


def scalar_act(N, v, r: int) -> Vector:
    """``v . r``: right multiply every coordinate by ``r``."""
    mul = N.mul
    return tuple(mul(a, r) for a in v)


def scalar_product(N, x, y) -> int:
    """``sum_i x_i o y_i``, accumulated left to right."""
    _check_dims(x, y)
    acc = 0
    for a, b in zip(x, y):
        acc = N.add(acc, N.mul(a, b))
    return acc


def right_normalize(N, v) -> Vector:
    """Scale ``v`` on the right so its first nonzero coordinate is 1."""
    for a in v:
        if a:
            return scalar_act(N, v, N.inv(a))
    return tuple(v)


@dataclass(frozen=True)
class SimpleVector:
    """A vector of weight one or two, leading entry equal to 1."""

    n: int
    entries: tuple  # ((index, value), ...) with strictly increasing indices

    def __post_init__(self):
        if len(self.entries) not in (1, 2):
            raise ValueError("a simple vector has weight 1 or 2")
        idx = [j for j, _ in self.entries]
        if idx != sorted(set(idx)) or not all(0 <= j < self.n for j in idx):
            raise ValueError(f"bad simple-vector indices {idx}")
        if self.entries[0][1] != 1 or any(v == 0 for _, v in self.entries):
            raise ValueError("leading value must be 1 and all values nonzero")

    @property
    def weight(self) -> int:
        return len(self.entries)

    def to_vector(self) -> Vector:
        v = [0] * self.n
        for j, a in self.entries:
            v[j] = a
        return tuple(v)

    def to_json(self):
        return {str(j): a for j, a in self.entries}


@dataclass(frozen=True)
class Block:
    pivot: int
    values: tuple  # ((coordinate, value), ...) sorted by coordinate, pivot first with value 1

    @property
    def support(self) -> tuple:
        return tuple(j for j, _ in self.values)

    def value_map(self) -> dict:
        return dict(self.values)


@dataclass(frozen=True)
class CanonicalSubgroup:
    n: int
    blocks: tuple = ()

    def __post_init__(self):
        seen = set()
        last = -1
        for b in self.blocks:
            coords = b.support
            if not coords or coords[0] != b.pivot or list(coords) != sorted(set(coords)):
                raise ValueError(f"block support must be sorted and start at the pivot: {b}")
            if b.values[0][1] != 1:
                raise ValueError(f"pivot value must be 1: {b}")
            if any(v == 0 for _, v in b.values):
                raise ValueError(f"block values must be nonzero: {b}")
            if b.pivot <= last:
                raise ValueError("blocks must be sorted by pivot")
            last = b.pivot
            if seen & set(coords):
                raise ValueError("block supports must be disjoint")
            if coords[-1] >= self.n:
                raise ValueError(f"coordinate {coords[-1]} out of range for n={self.n}")
            seen |= set(coords)

    @property
    def dim(self) -> int:
        return len(self.blocks)

    @property
    def j0(self) -> list[int]:
        used = {j for b in self.blocks for j in b.support}
        return [j for j in range(self.n) if j not in used]

    def basis(self) -> list[Vector]:
        out = []
        for b in self.blocks:
            v = [0] * self.n
            for j, a in b.values:
                v[j] = a
            out.append(tuple(v))
        return out

    @classmethod
    def from_basis(cls, N, n: int, vectors) -> "CanonicalSubgroup":
        """Canonical form of ``sum u_i R`` for nonzero vectors with disjoint supports."""
        blocks = []
        used: set = set()
        for u in vectors:
            if len(u) != n:
                raise DimensionMismatch(f"vector of length {len(u)} in R^{n}")
            supp = support(u)
            if not supp:
                raise ValueError("basis vectors must be nonzero")
            if used & set(supp):
                raise ValueError("basis vectors must have disjoint supports")
            used |= set(supp)
            w = right_normalize(N, u)
            blocks.append(Block(supp[0], tuple((j, w[j]) for j in supp)))
        blocks.sort(key=lambda b: b.pivot)
        return cls(n, tuple(blocks))

    @classmethod
    def full(cls, n: int) -> "CanonicalSubgroup":
        return cls(n, tuple(Block(j, ((j, 1),)) for j in range(n)))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "blocks": [{"pivot": b.pivot, "values": {str(j): a for j, a in b.values}} for b in self.blocks],
        }

    @classmethod
    def from_json(cls, data, order: int | None = None) -> "CanonicalSubgroup":
        try:
            n = int(data["n"])
            blocks = []
            for item in data["blocks"]:
                values = sorted((int(j), int(a)) for j, a in item["values"].items())
                if order is not None and any(not 0 <= a < order for _, a in values):
                    raise ValueError(f"element index out of range for order {order}")
                blocks.append(Block(int(item["pivot"]), tuple(values)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed subgroup JSON: {exc}") from exc
        return cls(n, tuple(blocks))


def contains(N, T: CanonicalSubgroup, v) -> bool:
    if len(v) != T.n:
        raise DimensionMismatch(f"vector of length {len(v)} in R^{T.n}")
    for j in T.j0:
        if v[j]:
            return False
    mul = N.mul
    for b in T.blocks:
        r = v[b.pivot]
        for j, a in b.values:
            if v[j] != mul(a, r):
                return False
    return True


def phi(N, T: CanonicalSubgroup, v) -> Vector:
    """Coordinates of ``v`` in ``T``: the value read at each block pivot."""
    if not contains(N, T, v):
        raise NotAMember(f"{v} is not in the subgroup")
    return tuple(v[b.pivot] for b in T.blocks)


def phi_inverse(N, T: CanonicalSubgroup, w) -> Vector:
    if len(w) != T.dim:
        raise DimensionMismatch(f"expected {T.dim} coordinates, got {len(w)}")
    v = [0] * T.n
    mul = N.mul
    for b, r in zip(T.blocks, w):
        for j, a in b.values:
            v[j] = mul(a, r)
    return tuple(v)


def enumerate_elements(N, T: CanonicalSubgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> set:
    size = N.order**T.dim
    if size > cap:
        raise TooLarge(f"subgroup has {size} elements (cap {cap})")
    return {phi_inverse(N, T, w) for w in product(range(N.order), repeat=T.dim)}
