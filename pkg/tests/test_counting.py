import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fatgraph.counting import (
    CountTable,
    brute_force_f,
    brute_force_long_f,
    brute_force_long_p,
    brute_force_p,
    class_size,
    even_cycle_factorizations,
    f_count,
    kappa,
    long_f,
    long_p,
    max_k,
    p1_closed_form,
    p_count,
    partitions,
    planar_long_count,
    r_v_reversed_closed_form,
    splits,
    zagier_bounds,
)
from fatgraph.errors import BudgetExceeded
from fatgraph.perm import CycleType, Permutation

small_partitions = st.integers(1, 7).flatmap(lambda n: st.sampled_from(list(partitions(n))))


def test_partitions_counts():
    assert [len(list(partitions(n))) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]
    assert list(partitions(3)) == [CycleType([3]), CycleType([2, 1]), CycleType([1, 1, 1])]


def test_class_size():
    assert class_size((3, 1)) == 8
    assert class_size((2, 2)) == 3
    assert sum(class_size(l) for l in partitions(6)) == 720


def test_splits_and_kappa():
    assert splits((5,), 3) == [(CycleType([3, 1, 1]), 1), (CycleType([2, 2, 1]), 1)]
    assert kappa((1, 1, 1), (3,)) == 1
    assert kappa((2, 1, 1, 1), (3, 2)) == 1
    assert kappa((1, 1, 1, 1), (3, 1)) == 4
    with pytest.raises(ValueError):
        splits((4,), 2)
    with pytest.raises(ValueError):
        kappa((2,), (1, 1, 1))


def test_small_values():
    assert p_count(1, (5,)) == 8
    assert p_count(1, (1, 1, 1)) == 2
    assert p_count(1, (3, 1)) == 3
    assert p_count(3, (3, 1)) == 3
    assert f_count((4,), (3, 1)) == 3
    assert long_p(1, CycleType((3, 1))) == 4


@pytest.mark.parametrize("n", range(1, 8))
def test_extreme_types(n):
    assert f_count([1] * n, (n,)) == 1
    assert f_count((n,), [1] * n) == math.factorial(n - 1)


@given(small_partitions)
def test_counts_match_enumeration(lam):
    n = lam.n
    for eta in partitions(n):
        assert f_count(eta, lam) == brute_force_f(eta, lam)
        assert long_f(eta, lam) == brute_force_long_f(eta, lam)
    for k in range(0, n + 2):
        assert p_count(k, lam) == brute_force_p(k, lam)
        assert long_p(k, lam) == brute_force_long_p(k, lam)


@given(small_partitions)
def test_totals_and_parity(lam):
    n = lam.n
    assert sum(f_count(eta, lam) for eta in partitions(n)) == math.factorial(n - 1)
    assert sum(p_count(k, lam) for k in range(1, n + 1)) == math.factorial(n - 1)
    for k in range(1, n + 1):
        if (n + 1 - k - lam.length) % 2:
            assert p_count(k, lam) == 0
        assert p_count(k, lam) == sum(f_count(eta, lam) for eta in partitions(n) if eta.length == k)
    top = max_k(lam)
    assert p_count(top, lam) > 0
    assert all(p_count(k, lam) == 0 for k in range(top + 1, n + 2))


@given(small_partitions, st.data())
def test_long_cycle_count_is_symmetric(lam, data):
    eta = data.draw(st.sampled_from(list(partitions(lam.n))))
    assert long_f(eta, lam) == long_f(lam, eta)
    assert f_count(eta, lam) * class_size(lam) == long_f(eta, lam) * math.factorial(lam.n - 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_planar_base_cases_match_enumeration(n):
    for lam in partitions(n):
        for eta in partitions(n):
            if eta.length + lam.length == n + 1:
                assert planar_long_count(eta, lam) == brute_force_long_f(eta, lam)
    with pytest.raises(ValueError):
        planar_long_count((2,), (2,))


def test_oracle_bases_give_same_table():
    table = CountTable(oracle_bases=True)
    for lam in partitions(7):
        for k in range(1, 8):
            assert table.long_p(k, lam) == long_p(k, lam)


def test_beyond_oracle_sizes():
    for n in (10, 11, 12):
        for lam in [(n,), [1] * n, (n - 2, 2)]:
            assert sum(p_count(k, lam) for k in range(1, n + 1)) == math.factorial(n - 1)
            assert p_count(1, lam) == p1_closed_form(lam)


def test_size_mismatch():
    with pytest.raises(ValueError):
        f_count((3,), (2, 1, 1))
    with pytest.raises(ValueError):
        p_count(1, (3,), n=4)


def test_oracle_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_p(1, (10,))
    with pytest.raises(BudgetExceeded):
        brute_force_f((2, 1), (3,), limit=2)
    with pytest.raises(BudgetExceeded):
        CountTable(oracle_bases=True, limit=3).long_p(1, CycleType((5,)))


@pytest.mark.parametrize("n", range(1, 9))
def test_closed_form_equals_recurrence(n):
    for lam in partitions(n):
        assert p1_closed_form(lam) == p_count(1, lam)


def test_zagier_bounds():
    assert zagier_bounds(5, 0) == (Fraction(48, 7), Fraction(348, 41))
    assert zagier_bounds(1, 1) == (1, Fraction(58, 19))
    for n in range(1, 9):
        for lam in partitions(n):
            if (n - lam.length) % 2:
                assert p_count(1, lam) == 0
                continue
            lo, hi = zagier_bounds(n, lam.multiplicities().get(1, 0))
            assert lo <= p_count(1, lam) <= hi
    with pytest.raises(ValueError):
        zagier_bounds(0, 0)


def test_reversed_rotation_closed_form():
    # rotation running against the face order: pi = s**-1 so D = s**2
    for d in range(1, 9):
        s = Permutation.from_cycles([range(d)])
        assert r_v_reversed_closed_form(d) == p_count(1, (s ** 2).cycle_type(), d)
    assert [r_v_reversed_closed_form(d) for d in range(1, 9)] == [1, 1, 1, 2, 8, 36, 180, 1104]


def _pairs_by_search(w):
    labels = sorted(w.ground)
    count = 0
    for tail in itertools.permutations(labels[1:]):
        c2 = Permutation.from_cycles([(labels[0],) + tail])
        if (w * c2.inverse()).is_single_cycle():
            count += 1
    return count


def test_even_cycle_factorizations():
    assert even_cycle_factorizations(Permutation.identity(range(1, 4))) == 2
    assert even_cycle_factorizations(Permutation.parse("(1 2)(3)(4)")) == 0
    for w in [Permutation.parse("(1 2 3)(4)(5)"), Permutation.parse("(1 2)(3 4)(5)")]:
        assert even_cycle_factorizations(w) == _pairs_by_search(w)
        assert even_cycle_factorizations(w) == p_count(1, w.cycle_type())
