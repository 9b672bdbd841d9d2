from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearspace.errors import DimensionMismatch, NotAMember, TooLarge
from nearspace.nvspace import (Block, CanonicalSubgroup, SimpleVector, contains, enumerate_elements, phi,
                               phi_inverse, right_normalize, scalar_act, scalar_product, support, unit_vector,
                               vec_add, vec_neg, weight, zero_vector)

BASIS = [(1, 0, 0, 1, 0), (0, 1, 1, 0, 0), (0, 0, 0, 0, 1)]

vec3 = st.tuples(*[st.integers(0, 8)] * 3)


def test_vector_basics(N9):
    assert zero_vector(3) == (0, 0, 0)
    assert unit_vector(4, 2, 5) == (0, 0, 5, 0)
    assert support((0, 3, 0, 1)) == [1, 3]
    assert weight((0, 3, 0, 1)) == 2
    v = (1, 2, 3)
    assert vec_add(N9, v, vec_neg(N9, v)) == (0, 0, 0)
    with pytest.raises(DimensionMismatch):
        vec_add(N9, (1, 2), (1, 2, 3))


def test_scalar_product_is_not_symmetric(N9):
    # frozen witness: <(0,3),(0,4)> = 3 o 4 differs from 4 o 3
    assert scalar_product(N9, (0, 3), (0, 4)) == N9.mul(3, 4) == 5
    assert scalar_product(N9, (0, 4), (0, 3)) == N9.mul(4, 3) == 7


@settings(max_examples=100, deadline=None)
@given(vec3, st.integers(0, 8), st.integers(0, 8))
def test_right_action_is_an_action(v, r, s):
    from nearspace.nearfield import nearfield_for_order
    N = nearfield_for_order(9)
    assert scalar_act(N, scalar_act(N, v, r), s) == scalar_act(N, v, N.mul(r, s))
    assert scalar_act(N, v, 1) == v


@settings(max_examples=100, deadline=None)
@given(vec3)
def test_right_normalize(v):
    from nearspace.nearfield import nearfield_for_order
    N = nearfield_for_order(9)
    w = right_normalize(N, v)
    supp = support(v)
    assert support(w) == supp
    if supp:
        assert w[supp[0]] == 1
        assert scalar_act(N, w, v[supp[0]]) == v


def test_simple_vector():
    s = SimpleVector(4, ((0, 1), (3, 5)))
    assert s.weight == 2
    assert s.to_vector() == (1, 0, 0, 5)
    assert s.to_json() == {"0": 1, "3": 5}
    for bad in [(), ((0, 1), (1, 1), (2, 1)), ((0, 2),), ((2, 1), (1, 3)), ((0, 1), (4, 1)), ((0, 1), (1, 0))]:
        with pytest.raises(ValueError):
            SimpleVector(4, bad)


def test_canonical_invariants():
    CanonicalSubgroup(3, (Block(0, ((0, 1), (2, 4))), Block(1, ((1, 1),))))
    bad = [
        (Block(1, ((1, 1),)), Block(0, ((0, 1),))),  # unsorted pivots
        (Block(0, ((0, 2),)),),  # pivot value
        (Block(0, ((0, 1), (1, 0))),),  # zero value
        (Block(1, ((0, 1), (1, 1))),),  # pivot not minimum
        (Block(0, ((0, 1), (1, 1))), Block(1, ((1, 1),))),  # overlap
        (Block(0, ((0, 1), (3, 1))),),  # out of range
    ]
    for blocks in bad:
        with pytest.raises(ValueError):
            CanonicalSubgroup(3, blocks)


def test_example_subgroup_phi(N9):
    S = CanonicalSubgroup.from_basis(N9, 5, BASIS)
    assert S.dim == 3 and S.j0 == []
    assert phi(N9, S, (1, 0, 0, 1, 1)) == (1, 0, 1)
    assert phi(N9, S, (0, 1, 1, 0, 2)) == (0, 1, 2)
    with pytest.raises(NotAMember):
        phi(N9, S, (1, 0, 0, 2, 0))
    for w in product(range(9), repeat=3):
        v = phi_inverse(N9, S, w)
        assert contains(N9, S, v)
        assert phi(N9, S, v) == w


def test_phi_is_additive_and_equivariant(N9):
    S = CanonicalSubgroup.from_basis(N9, 5, [(1, 0, 2, 0, 0), (0, 3, 0, 0, 7)])
    elems = sorted(enumerate_elements(N9, S))
    assert len(elems) == 81
    for x, y in product(elems[::7], repeat=2):
        assert phi(N9, S, vec_add(N9, x, y)) == vec_add(N9, phi(N9, S, x), phi(N9, S, y))
    for x in elems[::5]:
        for r in range(9):
            assert phi(N9, S, scalar_act(N9, x, r)) == scalar_act(N9, phi(N9, S, x), r)


def test_from_basis_normalizes(N9):
    S = CanonicalSubgroup.from_basis(N9, 3, [(0, 0, 5), (2, 7, 0)])
    assert [b.pivot for b in S.blocks] == [0, 2]
    assert all(b.values[0][1] == 1 for b in S.blocks)
    with pytest.raises(ValueError):
        CanonicalSubgroup.from_basis(N9, 3, [(1, 1, 0), (0, 1, 0)])
    with pytest.raises(ValueError):
        CanonicalSubgroup.from_basis(N9, 3, [(0, 0, 0)])
    with pytest.raises(DimensionMismatch):
        CanonicalSubgroup.from_basis(N9, 3, [(1, 0)])


def test_json_roundtrip(N9):
    S = CanonicalSubgroup.from_basis(N9, 5, BASIS)
    assert CanonicalSubgroup.from_json(S.to_json(), order=9) == S
    assert CanonicalSubgroup.from_json(CanonicalSubgroup.full(4).to_json()) == CanonicalSubgroup.full(4)
    for bad in [{}, {"n": 2}, {"n": 2, "blocks": [{"pivot": 0}]}, {"n": 2, "blocks": [{"pivot": 0, "values": {"0": 9}}]}]:
        with pytest.raises(ValueError):
            CanonicalSubgroup.from_json(bad, order=9)


def test_enumerate_cap(N9):
    with pytest.raises(TooLarge):
        enumerate_elements(N9, CanonicalSubgroup.full(7))
    assert enumerate_elements(N9, CanonicalSubgroup(3)) == {(0, 0, 0)}
