from math import factorial

import pytest

from nearspace.counting import (binomial, brute_count, count_all, count_subgroups, count_table, disjoint_support_sequences,
                                double_count_check, dowling_whitney, stirling2)
from nearspace.errors import TooLarge


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def test_stirling_matches_partition_enumeration():
    for n in range(8):
        sizes = [len(p) for p in set_partitions(list(range(n)))]
        for k in range(n + 2):
            assert stirling2(n, k) == sizes.count(k)
    assert stirling2(0, 0) == 1
    with pytest.raises(ValueError):
        stirling2(-1, 0)


def test_binomial():
    assert binomial(5, 2) == 10
    with pytest.raises(ValueError):
        binomial(2, 3)


def test_closed_form_matches_whitney():
    for q in (3, 4, 9, 64, 625):
        rows = dowling_whitney(q - 1, 10)
        for n, row in enumerate(rows):
            assert row == [count_subgroups(q, d, n) for d in range(n + 1)]


def test_small_rows():
    assert count_table(9, 3).rows == [[1], [1, 1], [1, 10, 1], [1, 91, 27, 1]]
    assert count_table(9, 3).totals == [1, 2, 12, 120]
    assert count_all(9, 0) == 1
    # dimension n: only R^n itself; dimension 0: only {0}
    for n in range(1, 8):
        assert count_subgroups(64, n, n) == 1
        assert count_subgroups(64, 0, n) == 1
        assert count_subgroups(9, 1, n) == (9**n - 1) // 8


def test_invalid_arguments():
    for args in [(2, 1, 1), (9, 3, 2), (9, -1, 2)]:
        with pytest.raises(ValueError):
            count_subgroups(*args)


def test_table_json():
    js = count_table(9, 2).to_json()
    assert js["rows"][2] == {"n": 2, "counts": [1, 10, 1], "total": 12}


def test_brute_count_normalized(N9):
    for n in (1, 2, 3):
        assert brute_count(N9, n) == [count_subgroups(9, d, n) for d in range(n + 1)]


def test_brute_count_literal_mode(N9):
    for n in (1, 2):
        assert brute_count(N9, n, mode="all") == brute_count(N9, n)


def test_brute_count_jobs_invariant(N9):
    assert brute_count(N9, 3, jobs=2, batch_size=500) == brute_count(N9, 3)


def test_brute_count_guards(N9):
    with pytest.raises(TooLarge):
        brute_count(N9, 2, mode="all", budget=1000)
    with pytest.raises(ValueError):
        brute_count(N9, 11)
    with pytest.raises(ValueError):
        brute_count(N9, 2, mode="some")


def test_sequence_count(N9):
    for n, dim in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]:
        seqs = list(disjoint_support_sequences(N9, n, dim))
        assert len(seqs) == len(set(seqs))
        assert len(seqs) == factorial(dim) * 8**dim * count_subgroups(9, dim, n)


def test_double_count(N9):
    for n, dim in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]:
        r = double_count_check(N9, n, dim)
        assert r.passed
        assert r.group_sizes == {factorial(dim) * 8**dim: count_subgroups(9, dim, n)}
