"""Finite Dickson nearfields and an axiom validator.

The classical Dickson coupling twists GF(q^n) multiplication by a power of
Frobenius that depends on the coset of one factor in ``F* / (F*)^n``.  The
textbook product is right distributive; we return its opposite so that the
resulting nearfield is *left* distributive::

    a o b = b ** (q ** j(a)) * a

where ``j(a) = psi^{-1}(log(a) mod n)`` and ``psi(t) = (q^t - 1)/(q - 1) mod n``.
Every built nearfield is pushed through :func:`validate_axioms` before it is
handed out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AxiomValidationFailed, DivisionByZero, InvalidDicksonPair, TooLarge
from .ff import DEFAULT_ORDER_CAP, Field, FieldSpec, _index_dtype, build_field, factorize, prime_power

TABLE_ORDER_LIMIT = 4096
LIST_ORDER_LIMIT = 1024
EXHAUSTIVE_TRIPLE_LIMIT = 10**9


@dataclass(frozen=True)
class DicksonPair:
    q: int
    n: int

    def __post_init__(self):
        pp = prime_power(self.q)
        if pp is None:
            raise InvalidDicksonPair(f"q={self.q} is not a prime power")
        if self.n < 1:
            raise InvalidDicksonPair(f"n must be positive, got {self.n}")
        for r in factorize(self.n):
            if (self.q - 1) % r:
                raise InvalidDicksonPair(f"prime {r} divides n={self.n} but not q-1={self.q - 1}")
        if self.n % 4 == 0 and (self.q - 1) % 4:
            raise InvalidDicksonPair(f"4 divides n={self.n} but not q-1={self.q - 1}")

    @property
    def order(self) -> int:
        return self.q**self.n


class Nearfield:
    """A finite left nearfield on the carrier of a finite field.

    Addition is the field addition.  Multiplication is given by ``twist``:
    ``a o b = b ** (q ** twist[a]) * a`` (``q`` is ``frobenius_base``).  With
    every twist zero this is the field itself.
    """

    def __init__(self, carrier: Field, twist, frobenius_base: int, pair: DicksonPair | None = None):
        self.field = carrier
        self.order = carrier.order
        self.char = carrier.p
        self.pair = pair
        self.frobenius_base = frobenius_base
        self.twist = np.asarray(twist, dtype=np.int64)
        self._twist = self.twist.tolist()
        n = self.order - 1
        # q^j mod (order-1), indexed by j
        self._qpow = [pow(frobenius_base, j, n) if n > 1 else 1 for j in range(max(self._twist) + 1)]

        self.add_table = self.mul_table = None
        if self.order <= TABLE_ORDER_LIMIT:
            self.add_table = carrier.add_table()
            self.mul_table = self._build_mul_table()
        self._add = self._mul = None
        if self.order <= LIST_ORDER_LIMIT:
            self._add = self.add_table.tolist()
            self._mul = self.mul_table.tolist()
        self._neg = [carrier.neg(a) for a in range(self.order)] if self.order <= DEFAULT_ORDER_CAP else None
        self._inv = None
        self.neg_one = carrier.neg(1)

    def _build_mul_table(self):
        n = self.order - 1
        log = np.array(self.field.log, dtype=np.int64)
        exp = np.array(self.field.exp, dtype=np.int64)
        qpow = np.array(self._qpow, dtype=np.int64)[self.twist]
        e = (log[None, 1:] * qpow[1:, None] + log[1:, None]) % n
        table = np.zeros((self.order, self.order), dtype=_index_dtype(self.order))
        table[1:, 1:] = exp[e]
        return table

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def is_field(self) -> bool:
        return not any(self._twist)

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self.field.add(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a] if self._neg is not None else self.field.neg(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        return self.twisted_mul(a, b)

    def twisted_mul(self, a: int, b: int) -> int:
        """Multiply through the twist rule, bypassing any table."""
        if a == 0 or b == 0:
            return 0
        F = self.field
        n = self.order - 1
        return F.exp[(F.log[b] * self._qpow[self._twist[a]] + F.log[a]) % n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        if self._inv is None:
            if self.order > LIST_ORDER_LIMIT:
                return self._solve_inv(a)
            inv = [0] * self.order
            for x in range(1, self.order):
                row = self._mul[x]
                inv[x] = row.index(1)
            self._inv = inv
        return self._inv[a]

    def _solve_inv(self, a):
        # a o x = 1  <=>  x^(q^j) = a^-1  <=>  x = (a^-1)^(q^-j)
        F = self.field
        n = self.order - 1
        qj_inv = pow(self._qpow[self._twist[a]], -1, n) if n > 1 else 1
        return F.exp[(-F.log[a] * qj_inv) % n]

    def __repr__(self):
        if self.pair is None:
            return f"Nearfield(order={self.order}, field multiplication)"
        return f"Nearfield(Dickson q={self.pair.q}, n={self.pair.n}, order={self.order})"

    # pickling drops the Python list mirrors, rebuilt on load
    def __getstate__(self):
        state = self.__dict__.copy()
        state["_add"] = state["_mul"] = state["_inv"] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        if self.order <= LIST_ORDER_LIMIT:
            self._add = self.add_table.tolist()
            self._mul = self.mul_table.tolist()

    @classmethod
    def from_field(cls, carrier: Field) -> "Nearfield":
        """Wrap a field's own multiplication as a (non-proper) nearfield."""
        return cls(carrier, np.zeros(carrier.order, dtype=np.int64), carrier.p)


nf_mul = Nearfield.mul
nf_inv = Nearfield.inv
nf_neg = Nearfield.neg


def psi_table(q: int, n: int) -> list[int]:
    return [((q**t - 1) // (q - 1)) % n for t in range(n)]


def build_dickson(pair: DicksonPair, *, cap: int = DEFAULT_ORDER_CAP, validate: str = "exhaustive",
                  samples: int = 10**6, seed: int = 0) -> Nearfield:
    """Build the Dickson nearfield for ``pair`` and validate it.

    ``validate`` selects the mode passed to :func:`validate_axioms`; the
    nearfield is only returned if every check passes.
    """
    if pair.order > cap:
        raise TooLarge(f"nearfield order {pair.order} exceeds cap {cap}")
    p, e = prime_power(pair.q)
    F = build_field(FieldSpec(p, e * pair.n), cap=cap)
    q, n = pair.q, pair.n
    psi = psi_table(q, n)
    if sorted(psi) != list(range(n)):
        raise InvalidDicksonPair(f"psi is not a bijection for q={q}, n={n}: {psi}")
    psi_inv = [0] * n
    for t, s in enumerate(psi):
        psi_inv[s] = t
    twist = [0] * F.order
    for a in range(1, F.order):
        twist[a] = psi_inv[F.log[a] % n]
    N = Nearfield(F, twist, q, pair)
    if validate:
        report = validate_axioms(N, validate, samples=samples, seed=seed)
        if not report.all_passed:
            raise AxiomValidationFailed(f"{N!r} failed axiom checks: {report.failed()}", report)
    return N


def dickson_pairs_for_order(order: int) -> list[DicksonPair]:
    """All proper (n >= 2) Dickson pairs with ``q**n == order``, smallest q first."""
    pp = prime_power(order)
    if pp is None:
        return []
    p, e = pp
    out = []
    for d in range(1, e):
        if e % d == 0:
            try:
                out.append(DicksonPair(p**d, e // d))
            except InvalidDicksonPair:
                pass
    return out


@lru_cache(maxsize=None)
def nearfield_for_order(order: int, validate: str = "exhaustive") -> Nearfield:
    """The proper Dickson nearfield of the given order with the smallest base q."""
    pairs = dickson_pairs_for_order(order)
    if not pairs:
        raise InvalidDicksonPair(f"no proper Dickson nearfield has order {order}")
    return build_dickson(pairs[0], validate=validate)


# -- axiom validation -------------------------------------------------------

AXIOMS = (
    "additive_group",
    "multiplicative_group",
    "left_distributive",
    "zero_symmetric",
    "neg_one_commutes",
    "two_term_zero_distributive",
)


@dataclass
class AxiomReport:
    order: int
    mode: str
    checks: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    properness_witness: tuple | None = None
    triples_checked: int = 0

    @property
    def all_passed(self) -> bool:
        return all(self.checks.get(name, False) for name in AXIOMS)

    @property
    def proper(self) -> bool:
        return self.properness_witness is not None

    def failed(self) -> list[str]:
        return [name for name in AXIOMS if not self.checks.get(name, False)]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "mode": self.mode,
            "triples_checked": self.triples_checked,
            "checks": {name: self.checks.get(name, False) for name in AXIOMS},
            "counterexamples": {k: list(v) for k, v in self.counterexamples.items() if v is not None},
            "all_passed": self.all_passed,
            "proper": self.proper,
            "properness_witness": list(self.properness_witness) if self.properness_witness else None,
        }


def _tables(N):
    if N.add_table is not None:
        return N.add_table.astype(np.int64), N.mul_table.astype(np.int64)
    F = N.field
    A = F.add_table().astype(np.int64)
    M = np.zeros((N.order, N.order), dtype=np.int64)
    for a in range(N.order):
        M[a] = [N.twisted_mul(a, b) for b in range(N.order)]
    return A, M


def _record(report, name, ok, witness):
    report.checks[name] = report.checks.get(name, True) and ok
    if not ok and report.counterexamples.get(name) is None:
        report.counterexamples[name] = tuple(int(x) for x in witness)


def _first_true_2d(mask):
    i = int(np.argmax(mask))
    return divmod(i, mask.shape[1])


def validate_axioms(N: Nearfield, mode: str = "exhaustive", samples: int = 10**6, seed: int = 0) -> AxiomReport:
    """Check the nearfield axioms and record a right-distributivity failure.

    Pairwise properties (identities, inverses, zero-symmetry, the -1 claim,
    the two-term zero-distributivity claim) are always checked on every pair.
    Triple properties (associativity, left distributivity, properness) are
    checked on all ``order**3`` triples in ``"exhaustive"`` mode or on
    ``samples`` uniformly random triples drawn with ``seed`` in ``"sampled"``.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown validation mode {mode!r}")
    q = N.order
    if mode == "exhaustive" and q**3 > EXHAUSTIVE_TRIPLE_LIMIT:
        raise TooLarge(f"exhaustive validation needs {q**3} triples (> {EXHAUSTIVE_TRIPLE_LIMIT})")
    report = AxiomReport(order=q, mode=mode)
    A, M = _tables(N)
    idx = np.arange(q)
    neg = np.array([N.field.neg(int(a)) for a in idx])
    neg_one = N.neg_one
    for name in AXIOMS:
        report.checks[name] = True

    # pairwise: additive identity, commutativity, inverses
    bad = A != A.T
    _record(report, "additive_group", not bad.any(), _first_true_2d(bad))
    _record(report, "additive_group", bool((A[0] == idx).all()), (0, int(np.argmin(A[0] == idx))))
    _record(report, "additive_group", bool((A[idx, neg] == 0).all()), (int(np.argmin(A[idx, neg] == 0)),))

    # pairwise: multiplicative identity, closure on nonzero, inverses
    nz = M[1:, 1:]
    _record(report, "multiplicative_group", bool((M[1] == idx).all() and (M[:, 1] == idx).all()), (1,))
    _record(report, "multiplicative_group", bool((nz != 0).all()), np.argwhere(nz == 0)[:1].ravel() + 1)
    has_inv = (nz == 1).any(axis=1)
    _record(report, "multiplicative_group", bool(has_inv.all()), (int(np.argmin(has_inv)) + 1,))
    rows_perm = all(len(set(row)) == q - 1 for row in nz.tolist())
    _record(report, "multiplicative_group", rows_perm, (0,))

    # zero symmetry
    _record(report, "zero_symmetric", bool((M[0] == 0).all() and (M[:, 0] == 0).all()),
            (int(np.argmax((M[0] != 0) | (M[:, 0] != 0))),))

    # (-1) x = x (-1) = -x
    ok = (M[neg_one] == neg) & (M[:, neg_one] == neg)
    _record(report, "neg_one_commutes", bool(ok.all()), (int(np.argmin(ok)),))

    # a o x + b o y = 0  =>  (a o x) o g + (b o y) o g = 0.  The hypothesis
    # depends only on the products u = a o x, w = b o y, and every element is
    # such a product (x = 1); so it suffices that u o g + (-u) o g = 0.
    lhs = A[M, M[neg]]
    bad = lhs != 0
    _record(report, "two_term_zero_distributive", not bad.any(), _first_true_2d(bad))

    if mode == "exhaustive":
        _exhaustive_triples(report, A, M, q)
        report.triples_checked = q**3
    else:
        _sampled_triples(report, A, M, q, samples, seed)
        report.triples_checked = samples
    return report


def _exhaustive_triples(report, A, M, q):
    # triples (a, b, c) scanned with a outermost; each slice covers all (b, c)
    for a in range(q):
        Ma, Aa = M[a], A[a]
        # (a+b)+c == a+(b+c)
        bad = A[Aa] != Aa[A]
        if bad.any():
            b, c = _first_true_2d(bad)
            _record(report, "additive_group", False, (a, b, c))
        # (a b) c == a (b c)
        bad = M[Ma] != Ma[M]
        if bad.any():
            b, c = _first_true_2d(bad)
            _record(report, "multiplicative_group", False, (a, b, c))
        # a (b + c) == a b + a c
        bad = Ma[A] != A[Ma[:, None], Ma[None, :]]
        if bad.any():
            b, c = _first_true_2d(bad)
            _record(report, "left_distributive", False, (a, b, c))
        # properness: (a + b) c != a c + b c
        if report.properness_witness is None:
            bad = M[Aa] != A[Ma[None, :], M]
            if bad.any():
                b, c = _first_true_2d(bad)
                report.properness_witness = (a, b, c)


def _sampled_triples(report, A, M, q, samples, seed):
    rng = np.random.default_rng(seed)
    chunk = 1 << 18
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        a, b, c = rng.integers(0, q, size=(3, size))
        checks = (
            ("additive_group", A[A[a, b], c] != A[a, A[b, c]]),
            ("multiplicative_group", M[M[a, b], c] != M[a, M[b, c]]),
            ("left_distributive", M[a, A[b, c]] != A[M[a, b], M[a, c]]),
        )
        for name, bad in checks:
            if bad.any():
                i = int(np.argmax(bad))
                _record(report, name, False, (a[i], b[i], c[i]))
        if report.properness_witness is None:
            bad = M[A[a, b], c] != A[M[a, c], M[b, c]]
            if bad.any():
                i = int(np.argmax(bad))
                report.properness_witness = (int(a[i]), int(b[i]), int(c[i]))
        done += size
