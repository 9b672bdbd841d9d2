from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearspace.errors import DivisionByZero, NotPrime, TooLarge
from nearspace.ff import FieldSpec, build_field, factorize, is_prime, prime_power

SMALL = [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3)]


def schoolbook_mul(F, a, b):
    """Polynomial product reduced by the modulus, digit by digit."""
    p, m, f = F.p, F.m, F.modulus
    da = [(a // p**i) % p for i in range(m)]
    db = [(b // p**i) % p for i in range(m)]
    prod_ = [0] * (2 * m - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod_[i + j] = (prod_[i + j] + x * y) % p
    for deg in range(2 * m - 2, m - 1, -1):
        c = prod_[deg]
        if c:
            for i in range(m + 1):
                prod_[deg - m + i] = (prod_[deg - m + i] - c * f[i]) % p
    return sum(prod_[i] * p**i for i in range(m))


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert prime_power(625) == (5, 4)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_gf3_generator_forced():
    F = build_field(FieldSpec(3, 1))
    assert F.order == 3
    assert F.generator == 2
    assert F.add(1, 2) == 0


def test_not_prime():
    with pytest.raises(NotPrime):
        build_field(FieldSpec(4, 1))


def test_too_large():
    with pytest.raises(TooLarge):
        build_field(FieldSpec(3, 2), cap=8)


def test_gf9_order_of_every_element_divides_8():
    F = build_field(FieldSpec(3, 2))
    for a in range(1, 9):
        x = 1
        for _ in range(8):
            x = schoolbook_mul(F, x, a)
        assert x == 1


@pytest.mark.parametrize("p,m", SMALL)
def test_modulus_irreducible_and_smallest(p, m):
    F = build_field(FieldSpec(p, m))
    f = F.modulus
    assert len(f) == m + 1 and f[-1] == 1

    def evaluate(poly, x):
        return sum(c * x**i for i, c in enumerate(poly)) % p

    if m in (2, 3):
        # degree <= 3: irreducible iff no root; every smaller monic candidate has a root
        assert all(evaluate(f, x) for x in range(p))
        low = sum(c * p**i for i, c in enumerate(f[:-1]))
        for smaller in range(low):
            cand = [(smaller // p**i) % p for i in range(m)] + [1]
            assert any(evaluate(cand, x) == 0 for x in range(p))


@pytest.mark.parametrize("p,m", SMALL)
def test_mul_matches_schoolbook(p, m):
    F = build_field(FieldSpec(p, m))
    for a, b in product(range(F.order), repeat=2):
        assert F.mul(a, b) == schoolbook_mul(F, a, b)


@pytest.mark.parametrize("p,m", SMALL)
def test_field_axioms_exhaustive(p, m):
    F = build_field(FieldSpec(p, m))
    els = range(F.order)
    for a, b in product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
    for a, b, c in product(els, repeat=3):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, a) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.exp[F.log[a]] == a


def test_inverse_of_zero():
    F = build_field(FieldSpec(3, 2))
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_frobenius_gf9_is_a_ring_automorphism():
    F = build_field(FieldSpec(3, 2))
    for a, b in product(range(9), repeat=2):
        assert F.frobenius(F.add(a, b), 1) == F.add(F.frobenius(a, 1), F.frobenius(b, 1))
        assert F.frobenius(F.mul(a, b), 1) == F.mul(F.frobenius(a, 1), F.frobenius(b, 1))


@pytest.mark.parametrize("p,m", SMALL + [(5, 4), (2, 6)])
def test_frobenius_order_divides_m(p, m):
    F = build_field(FieldSpec(p, m))
    for a in range(F.order):
        assert F.frobenius(a, m) == a
        assert F.frobenius(a, 1) == F.pow(a, p)


def test_pow_edge_cases():
    F = build_field(FieldSpec(5, 2))
    assert F.pow(0, 0) == 1
    assert F.pow(0, 3) == 0
    assert F.pow(7, -1) == F.inv(7)
    with pytest.raises(DivisionByZero):
        F.pow(0, -1)


def test_element_str():
    F = build_field(FieldSpec(3, 2))
    assert F.element_str(0) == "0"
    assert F.element_str(5) == "2 + X"


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 624), st.integers(0, 624), st.integers(0, 624))
def test_gf625_ring_laws(a, b, c):
    F = build_field(FieldSpec(5, 4))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == schoolbook_mul(F, a, b)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
