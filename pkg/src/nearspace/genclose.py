"""Generated R-subgroups, seed sets and the linearity index.

Two independent routes compute ``gen(V)``:

* :func:`canonical_gen` classifies the columns of the matrix with rows ``V``
  into classes of mutual left multiples.  Each class is one block of the
  canonical decomposition; all-zero columns are outside every block.  See
  ``docs/derivation.md`` for why this equals the generated subgroup.
* :func:`lc_closure` iterates "all linear combinations" levels until a
  fixpoint, materializing every element.

The two are compared against each other in the test suite.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice, product

import numpy as np

from .errors import CapExceeded, DimensionMismatch, InternalInconsistency, TooLarge
from .nvspace import Block, CanonicalSubgroup, SimpleVector, phi_inverse, zero_vector

DEFAULT_CLOSURE_CAP = 10**6
DEFAULT_COLUMN_CAP = 10**6


def _infer_dim(V, n):
    V = [tuple(v) for v in V]
    if n is None:
        if not V:
            raise ValueError("ambient dimension n is required when V is empty")
        n = len(V[0])
    for v in V:
        if len(v) != n:
            raise DimensionMismatch(f"vector {v} does not lie in R^{n}")
    return V, n


def _classify(N, V, n):
    """Group nonzero column indices into mutual-left-multiple classes.

    Returns ``(classes, zero_cols)`` where ``classes`` is a list of
    ``(columns, normalized_key)`` ordered by smallest column.
    """
    mul, inv = N.mul, N.inv
    classes: dict = {}
    zero_cols = []
    for j in range(n):
        col = [v[j] for v in V]
        lead = next((c for c in col if c), 0)
        if not lead:
            zero_cols.append(j)
            continue
        li = inv(lead)
        key = tuple(mul(li, c) for c in col)
        classes.setdefault(key, []).append(j)
    return list(classes.values()), zero_cols


def _blocks(N, V, n):
    classes, zero_cols = _classify(N, V, n)
    mul, inv = N.mul, N.inv
    blocks = []
    for cols in classes:
        p = cols[0]
        rows = [t for t, v in enumerate(V) if v[p]]
        inv_p = {t: inv(V[t][p]) for t in rows}
        values = [(p, 1)]
        for j in cols[1:]:
            u = {mul(V[t][j], inv_p[t]) for t in rows}
            if len(u) != 1 or any(V[t][j] for t in range(len(V)) if t not in inv_p):
                raise InternalInconsistency(f"columns {p} and {j} are not left multiples")
            values.append((j, u.pop()))
        blocks.append(Block(p, tuple(values)))
    return blocks, classes, zero_cols


def canonical_key(N, V, n) -> tuple:
    """Hashable canonical form of ``gen(V)``; cheaper than :func:`canonical_gen`."""
    blocks, _, _ = _blocks(N, V, n)
    return tuple((b.pivot, b.values) for b in blocks)


@dataclass(frozen=True)
class GenResult:
    subgroup: CanonicalSubgroup
    certificates: tuple  # SimpleVector, sorted
    column_classes: tuple  # tuple of column-index tuples

    @property
    def dim(self) -> int:
        return self.subgroup.dim

    def to_json(self) -> dict:
        return {
            "subgroup": self.subgroup.to_json(),
            "dim": self.dim,
            "j0": self.subgroup.j0,
            "column_classes": [list(c) for c in self.column_classes],
            "certificates": [c.to_json() for c in self.certificates],
        }


def canonical_gen(N, V, n: int | None = None) -> GenResult:
    """The R-subgroup generated by ``V`` in canonical form.

    Certificates are simple vectors ``e`` with ``gen(V) = {e}^perp`` intersected
    over all of them: one weight-1 vector per all-zero column and, for each
    class, one weight-2 vector tying the pivot to each other class column.
    """
    V, n = _infer_dim(V, n)
    blocks, classes, zero_cols = _blocks(N, V, n)
    certs = [SimpleVector(n, ((j, 1),)) for j in zero_cols]
    for b in blocks:
        for j, u in b.values[1:]:
            certs.append(SimpleVector(n, ((b.pivot, 1), (j, N.neg(N.inv(u))))))
    certs.sort(key=lambda e: e.entries)
    return GenResult(CanonicalSubgroup(n, tuple(blocks)), tuple(certs), tuple(tuple(c) for c in classes))


# -- LC closure --------------------------------------------------------------

@dataclass
class ClosureTrace:
    levels: list  # |LC_0|, |LC_1|, ..., |LC_index|
    index: int
    elements: frozenset = field(repr=False)
    dim: int = 0

    def to_json(self, include_elements: bool = False) -> dict:
        out = {"levels": self.levels, "index": self.index, "size": len(self.elements), "dim": self.dim}
        if include_elements:
            out["elements"] = [list(v) for v in sorted(self.elements)]
        return out


def _gf_p_basis(rows, p):
    """Reduced row basis over GF(p) of an integer matrix."""
    mat = np.asarray(rows, dtype=np.int64) % p
    basis = []
    for col in range(mat.shape[1]):
        hit = np.flatnonzero(mat[:, col])
        if not len(hit):
            continue
        piv = mat[hit[0]] * pow(int(mat[hit[0], col]), -1, p) % p
        mat = (mat - np.outer(mat[:, col], piv)) % p
        mat = mat[mat.any(axis=1)]
        basis.append(piv)
        if not len(mat):
            break
    return np.array(basis, dtype=np.int64).reshape(len(basis), np.shape(rows)[1])


@lru_cache(maxsize=64)
def _coefficient_grid(p, r):
    return np.array(list(product(range(p), repeat=r)), dtype=np.int64).reshape(-1, r)


def _unique_rows(rows, base):
    if base ** rows.shape[1] < 2**62:
        keys = rows @ (base ** np.arange(rows.shape[1], dtype=np.int64))
        _, first = np.unique(keys, return_index=True)
        return rows[first]
    return np.unique(rows, axis=0)


class _Coords:
    """Conversion between vectors of element indices and GF(p) digit rows."""

    def __init__(self, N, n):
        self.p = N.char
        self.n = n
        self.digits = N.field.digit_array()
        self.m = self.digits.shape[1]
        self.weights = self.p ** np.arange(self.m, dtype=np.int64)

    def to_digits(self, vecs):
        return self.digits[vecs].reshape(len(vecs), self.n * self.m)

    def span(self, basis):
        d = (_coefficient_grid(self.p, len(basis)) @ basis) % self.p
        return d.reshape(len(d), self.n, self.m) @ self.weights


def lc_closure(N, V, n: int | None = None, cap: int = DEFAULT_CLOSURE_CAP) -> ClosureTrace:
    """Iterate the linear-combination levels of ``V`` to their fixpoint.

    ``LC_0 = V + {0}`` and each following level is the additive closure of all
    right multiples ``w . r`` of the previous level.  The returned ``index``
    is the first level that equals the generated subgroup.

    Every level from ``LC_1`` on is an additive subgroup of R^n, i.e. a
    GF(p)-subspace of the digit space, so levels are tracked by a GF(p) basis;
    ``LC_i`` and ``LC_{i+1}`` are nested, hence equal exactly when their
    sizes agree.
    """
    V, n = _infer_dim(V, n)
    dim = canonical_gen(N, V, n).dim
    if N.order**dim > cap:
        raise CapExceeded(f"gen(V) has dimension {dim}, i.e. {N.order}^{dim} elements > cap {cap}", dim=dim)
    coords = _Coords(N, n)
    mul = N.mul_table if N.mul_table is not None else np.array(
        [[N.mul(a, b) for b in range(N.order)] for a in range(N.order)])
    level = np.array(sorted(set(V) | {zero_vector(n)}), dtype=np.int64).reshape(-1, n)
    levels = [len(level)]
    scalars = np.arange(1, N.order)
    while True:
        # all w . r, shape (|level| * (order-1), n)
        scaled = _unique_rows(mul[level[:, None, :], scalars[None, :, None]].reshape(-1, n), N.order)
        basis = _gf_p_basis(coords.to_digits(scaled), coords.p)
        size = coords.p ** len(basis)
        if size > cap:
            raise CapExceeded(f"closure level has {size} elements > cap {cap}", dim=dim)
        if size == levels[-1]:
            break
        level = coords.span(basis)
        levels.append(size)
    elements = frozenset(map(tuple, level.tolist()))
    return ClosureTrace(levels, len(levels) - 1, elements, dim)


# -- seed matrices and seed numbers -----------------------------------------

def mdim(q: int, k: int) -> int:
    """Largest n such that k vectors can generate R^n, for |R| = q."""
    if q < 2 or k < 1:
        raise ValueError("need q >= 2 and k >= 1")
    return (q**k - 1) // (q - 1)


def seed_number(q: int, dim: int) -> int:
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    if dim == 0:
        return 0
    k = 1
    while mdim(q, k) < dim:
        k += 1
    return k


def normalized_vectors(q: int, k: int):
    """Nonzero vectors of R^k whose first nonzero entry is 1, in lexicographic order."""
    if k == 0:
        return
    yield from ((0,) + v for v in normalized_vectors(q, k - 1))
    for rest in product(range(q), repeat=k - 1):
        yield (1,) + rest


def build_seed_matrix(N, k: int, cap: int = DEFAULT_COLUMN_CAP) -> list:
    """Rows of the k x mdim(q, k) matrix whose columns are all normalized vectors."""
    width = mdim(N.order, k)
    if width > cap:
        raise TooLarge(f"seed matrix would have {width} columns (cap {cap})")
    cols = list(normalized_vectors(N.order, k))
    return [tuple(c[t] for c in cols) for t in range(k)]


def find_seed_set(N, T: CanonicalSubgroup) -> list:
    """A smallest generating set of ``T``, verified before it is returned."""
    if T.dim == 0:
        return []
    k = seed_number(N.order, T.dim)
    cols = list(islice(normalized_vectors(N.order, k), T.dim))
    rows = [tuple(c[t] for c in cols) for t in range(k)]
    seeds = [phi_inverse(N, T, w) for w in rows]
    if canonical_gen(N, seeds, T.n).subgroup != T:
        raise InternalInconsistency("seed set does not generate the subgroup")
    return seeds


# -- linearity index search -------------------------------------------------

@dataclass
class LinearityReport:
    max_index: int
    witnesses: list  # vector tuples achieving max_index, in candidate order
    counts: dict  # index -> number of instances
    instances: int
    strategy: str

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "instances": self.instances,
            "max_index": self.max_index,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "witnesses": [[list(v) for v in w] for w in self.witnesses],
        }


def _candidates(q, n_values, k_values, strategy, count, seed):
    if strategy == "exhaustive":
        for n in n_values:
            vecs = list(normalized_vectors(q, n))
            for k in k_values:
                yield from combinations(vecs, k)
    elif strategy == "random":
        if count is None or seed is None:
            raise ValueError("random strategy needs count and seed")
        rng = random.Random(seed)
        n_values, k_values = list(n_values), list(k_values)
        for _ in range(count):
            n = rng.choice(n_values)
            k = rng.choice(k_values)
            yield tuple(tuple(rng.randrange(q) for _ in range(n)) for _ in range(k))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")


def _index_batch(args):
    N, batch, cap = args
    return [lc_closure(N, V, len(V[0]), cap).index for V in batch]


def search_linearity_index(N, n_values, k_values, strategy: str = "exhaustive", count: int | None = None,
                           seed: int | None = None, cap: int = DEFAULT_CLOSURE_CAP, jobs: int = 1,
                           batch_size: int = 256) -> LinearityReport:
    """Compute the linearity index over many vector tuples and report the maximum.

    ``exhaustive`` walks every set of k distinct normalized vectors in R^n
    (right scaling a generator leaves every LC level unchanged, so this loses
    nothing).  ``random`` draws ``count`` raw tuples with ``random.Random(seed)``.
    """
    cands = list(_candidates(N.order, n_values, k_values, strategy, count, seed))
    batches = [cands[i:i + batch_size] for i in range(0, len(cands), batch_size)]
    if jobs > 1 and len(batches) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_index_batch, [(N, b, cap) for b in batches]))
    else:
        parts = [_index_batch((N, b, cap)) for b in batches]
    indices = [i for part in parts for i in part]
    counts = Counter(indices)
    top = max(indices, default=0)
    witnesses = [V for V, i in zip(cands, indices) if i == top]
    return LinearityReport(top, witnesses, dict(counts), len(cands), strategy)
