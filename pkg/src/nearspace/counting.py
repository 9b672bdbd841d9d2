"""Exact counts of R-subgroups of R^n.

Everything here is integer arithmetic.  ``count_subgroups(q, l, n)`` is the
closed form

    sum_{d=0}^{n-l} C(n, d) * S(n-d, l) * (q-1)^(n-d-l)

with S the Stirling numbers of the second kind.  ``brute_count`` and
``double_count_check`` recount small cases directly from a nearfield, and
``dowling_whitney`` provides a third route through a triangle recurrence.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb, factorial

from .errors import TooLarge
from .genclose import canonical_gen, canonical_key, mdim, normalized_vectors
from .nvspace import CanonicalSubgroup

_STIRLING = [[1]]


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind, from a memoized recurrence table."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be nonnegative")
    if k > n:
        return 0
    while len(_STIRLING) <= n:
        prev = _STIRLING[-1]
        m = len(_STIRLING)
        row = [0] * (m + 1)
        for j in range(1, m + 1):
            row[j] = j * (prev[j] if j < len(prev) else 0) + prev[j - 1]
        _STIRLING.append(row)
    return _STIRLING[n][k]


def binomial(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return comb(n, k)


def count_subgroups(q: int, dim: int, n: int) -> int:
    """Number of R-subgroups of dimension ``dim`` in R^n for |R| = q."""
    if q < 3:
        raise ValueError("a proper nearfield has at least 3 elements")
    if not 0 <= dim <= n:
        raise ValueError(f"need 0 <= dim <= n, got dim={dim}, n={n}")
    return sum(binomial(n, d) * stirling2(n - d, dim) * (q - 1) ** (n - d - dim) for d in range(n - dim + 1))


def count_all(q: int, n: int) -> int:
    return sum(count_subgroups(q, dim, n) for dim in range(n + 1))


def dowling_whitney(b: int, n_max: int) -> list[list[int]]:
    """Whitney numbers W(n, k) of the Dowling lattice with parameter ``b``.

    Built from ``W(n, k) = (1 + b k) W(n-1, k) + W(n-1, k-1)``; row sums are
    the Dowling numbers.  Independent of the closed form above.
    """
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1] + [0]
        rows.append([(1 + b * k) * prev[k] + (prev[k - 1] if k else 0) for k in range(n + 1)])
    return rows


@dataclass
class CountTable:
    q: int
    rows: list  # rows[n][dim]

    @property
    def totals(self) -> list[int]:
        return [sum(r) for r in self.rows]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "rows": [{"n": n, "counts": r, "total": sum(r)} for n, r in enumerate(self.rows)],
        }


def count_table(q: int, n_max: int) -> CountTable:
    return CountTable(q, [[count_subgroups(q, dim, n) for dim in range(n + 1)] for n in range(n_max + 1)])


# -- brute force -------------------------------------------------------------

def _key_batch(args):
    N, n, batch = args
    return {canonical_key(N, V, n) for V in batch}


def brute_count(N, n: int, *, mode: str = "normalized", jobs: int = 1, budget: int = 10**6,
                batch_size: int = 4096) -> list[int]:
    """Count R-subgroups of R^n per dimension by generating them from pairs.

    For n <= mdim(q, 2) every subgroup of R^n needs at most two generators
    (seed number formula), so the distinct ``gen`` of the empty set, all
    singletons and all pairs are exactly the subgroups of R^n.

    ``mode="all"`` walks every ordered pair of R^n x R^n literally.
    ``mode="normalized"`` (default) uses unordered pairs of vectors whose
    first nonzero entry is 1: ``gen(v r, w s) = gen(v, w)`` for nonzero r, s,
    so this reaches the same subgroups with far fewer pairs.
    """
    q = N.order
    if n > mdim(q, 2):
        raise ValueError(f"n={n} exceeds mdim({q}, 2) = {mdim(q, 2)}; pairs no longer suffice")
    if mode == "all":
        size = q ** (2 * n)
        vecs = list(product(range(q), repeat=n))
        pairs = product(vecs, repeat=2)
        singles = [(v,) for v in vecs]
    elif mode == "normalized":
        vecs = list(normalized_vectors(q, n))
        size = len(vecs) * (len(vecs) + 1) // 2
        pairs = combinations_with_replacement(vecs, 2)
        singles = [(v,) for v in vecs]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if size > budget:
        raise TooLarge(f"{size} pairs exceed budget {budget}")
    cands = [()] + singles
    cands.extend(pairs)
    batches = [cands[i:i + batch_size] for i in range(0, len(cands), batch_size)]
    if jobs > 1 and len(batches) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_key_batch, [(N, n, b) for b in batches]))
    else:
        parts = [_key_batch((N, n, b)) for b in batches]
    keys = set().union(*parts)
    counts = [0] * (n + 1)
    for key in keys:
        counts[len(key)] += 1
    return counts


@dataclass
class DoubleCountResult:
    passed: bool
    expected_size: int
    group_sizes: dict  # size -> number of subgroups with that many sequences
    subgroups: int
    sequences: int
    counterexample: dict | None = None


def disjoint_support_sequences(N, n: int, dim: int):
    """All ordered sequences of ``dim`` nonzero vectors of R^n with disjoint supports."""
    nonzero = range(1, N.order)
    for labels in product(range(dim + 1), repeat=n):
        if dim and len(set(labels) - {0}) != dim:
            continue
        coords = [j for j in range(n) if labels[j]]
        for values in product(nonzero, repeat=len(coords)):
            seq = [[0] * n for _ in range(dim)]
            for j, a in zip(coords, values):
                seq[labels[j] - 1][j] = a
            yield tuple(tuple(u) for u in seq)


def double_count_check(N, n: int, dim: int) -> DoubleCountResult:
    """Every subgroup of dimension ``dim`` arises from ``dim! (q-1)^dim`` sequences."""
    expected = factorial(dim) * (N.order - 1) ** dim
    groups: dict = defaultdict(int)
    total = 0
    for seq in disjoint_support_sequences(N, n, dim):
        total += 1
        T = CanonicalSubgroup.from_basis(N, n, seq)
        via_gen = canonical_gen(N, seq, n).subgroup
        if via_gen != T:
            return DoubleCountResult(False, expected, {}, len(groups), total,
                                     {"sequence": seq, "direct": T.to_json(), "gen": via_gen.to_json()})
        groups[T] += 1
    sizes = Counter(groups.values())
    bad = next((T for T, c in groups.items() if c != expected), None)
    counterexample = None if bad is None else {"subgroup": bad.to_json(), "size": groups[bad]}
    return DoubleCountResult(bad is None, expected, dict(sizes), len(groups), total, counterexample)
