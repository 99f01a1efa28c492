from fractions import Fraction

import numpy as np
import pytest

from ksubmod.checkers import brute_force_max, check_ksubmodular, check_monotone
from ksubmod.hardness import (HardnessError, HardnessOracle, HardnessParams, d_vector, eval_f, eval_g,
                              f_marginal, g_aligned, is_unbalanced, n_zero, penalty, random_partition)
from ksubmod.labeling import Labeling, LabelingError, all_labelings, all_partitions

SMALL = HardnessParams(2, 2, Fraction(1, 2), (1, 2))
TRIPLES = [(2, 2, Fraction(1, 2)), (2, 4, Fraction(1, 4)), (3, 4, Fraction(1, 4))]


def L(*labels, k=2):
    return Labeling(tuple(labels), k)


def f_formula(k, n, eps, n0):
    # direct rational evaluation, independent of the integer form used by eval_f
    return (k + 1 + 2 * k * eps) * n * n - (k - 1) * n0 * n0 - 2 * (1 + k * eps) * n * n0


def brute_d(params, x):
    """``d_j = sum_i c_{i, j+i-1}`` written straight from the counts ``c_{i,j}``."""
    k = params.k
    c = {(i, j): sum(1 for e in range(params.n) if x[e] == i and params.partition[e] == j)
         for i in range(1, k + 1) for j in range(1, k + 1)}
    wrap = lambda idx: (idx - 1) % k + 1
    return tuple(sum(c[i, wrap(j + i - 1)] for i in range(1, k + 1)) for j in range(1, k + 1))


def test_n_zero_examples():
    assert n_zero(L(0, 0)) == 2
    assert n_zero(L(1, 0)) == 1
    assert n_zero(L(2, 1)) == 0


def test_f_values_by_n0():
    base = HardnessParams(2, 2, Fraction(1, 2))
    assert eval_f(base, L(0, 0)) == 0
    assert eval_f(base, L(1, 0)) == 11
    assert eval_f(base, L(2, 1)) == 20
    assert all(eval_f(base, x) >= 0 for x in all_labelings(2, 2))


def test_d_vector_examples():
    assert d_vector(SMALL, L(1, 2)) == (2, 0)
    assert d_vector(SMALL, L(1, 1)) == (1, 1)
    assert d_vector(SMALL, L(0, 0)) == (0, 0)


def test_g_examples():
    assert eval_g(SMALL, L(1, 2)) == 21
    assert eval_g(SMALL, L(1, 1)) == 20
    assert eval_g(SMALL, L(0, 0)) == 0
    assert brute_force_max(HardnessOracle(SMALL, hidden=True)).optimum == 21


def test_unbalanced_examples():
    assert is_unbalanced(SMALL, L(1, 2))
    assert not is_unbalanced(SMALL, L(1, 1))
    assert not is_unbalanced(SMALL, L(0, 0))


def test_partition_required():
    base = HardnessParams(2, 2, Fraction(1, 2))
    with pytest.raises(HardnessError):
        d_vector(base, L(1, 2))
    with pytest.raises(HardnessError):
        HardnessOracle(base, hidden=True)


def test_params_validation():
    with pytest.raises(HardnessError):
        HardnessParams(2, 3, Fraction(1, 2))
    with pytest.raises(HardnessError):
        HardnessParams(2, 2, Fraction(0))
    with pytest.raises(HardnessError):
        HardnessParams(2, 2, Fraction(1, 2), (1, 3))
    with pytest.raises(HardnessError):
        HardnessParams(2, 2, Fraction(1, 2), (1,))
    with pytest.raises(LabelingError):
        eval_f(HardnessParams(2, 2, Fraction(1, 2)), L(1, 2, 0))


@pytest.mark.parametrize("k,n,eps", TRIPLES)
def test_f_matches_rational_formula(k, n, eps):
    params = HardnessParams(k, n, eps)
    for x in all_labelings(n, k):
        assert eval_f(params, x) == f_formula(k, n, eps, n_zero(x))


@pytest.mark.parametrize("k,n,eps", TRIPLES)
def test_f_marginal_formula(k, n, eps):
    # the gain depends only on n0 before the assignment: (k-1)(2 n0 - 1) + 2(1 + k eps) n
    params = HardnessParams(k, n, eps)
    for x in all_labelings(n, k):
        for e in range(n):
            if x[e] == 0:
                for i in range(1, k + 1):
                    gain = eval_f(params, x.assign(e, i)) - eval_f(params, x)
                    n0 = n_zero(x)
                    assert gain == f_marginal(params, n0)
                    assert gain == (k - 1) * (2 * n0 - 1) + 2 * (1 + k * eps) * n


@pytest.mark.parametrize("k,n,eps", TRIPLES)
def test_d_vector_matches_counts_and_balanced_identity(k, n, eps):
    for P in all_partitions(n, k):
        params = HardnessParams(k, n, eps, P.labels)
        for x in all_labelings(n, k):
            d = d_vector(params, x)
            assert d == brute_d(params, x)
            assert sum(d) <= n
            if not is_unbalanced(params, x):
                assert eval_g(params, x) == eval_f(params, x)
            for a in range(k):
                for b in range(a + 1, k):
                    single = penalty(params, (d[a], d[b]))
                    assert (single == 0) == (abs(d[a] - d[b]) <= params.eps_n)


@pytest.mark.parametrize("k,n,eps", TRIPLES)
def test_hardness_properties_on_every_partition(k, n, eps):
    base = HardnessParams(k, n, eps)
    f = HardnessOracle(base, hidden=False)
    assert check_monotone(f).passed and check_ksubmodular(f).passed
    assert brute_force_max(f).optimum == (k + 1 + 2 * k * eps) * n * n
    for P in all_partitions(n, k):
        params = base.with_partition(P.labels)
        g = HardnessOracle(params, hidden=True)
        values = None
        assert check_monotone(g, values).passed
        assert check_ksubmodular(g, values).passed
        aligned = eval_g(params, params.aligned())
        assert aligned == (k + 1 + 2 * k * eps) * n * n + (k - 1) * (n - eps * n) ** 2
        assert aligned == g_aligned(params)
        assert brute_force_max(g).optimum >= (k + 1) * n * n + (k - 1) * (n - eps * n) ** 2


def test_f_maximized_by_every_partition():
    f = HardnessOracle(HardnessParams(2, 2, Fraction(1, 2)), hidden=False)
    best = brute_force_max(f)
    assert best.optimum == 20
    assert {x.labels for x in best.maximizers} == {(1, 1), (2, 1), (1, 2), (2, 2)}


def test_random_partition_contract():
    assert random_partition(6, 1, seed=3) == (1,) * 6
    assert random_partition(50, 3, seed=7) == random_partition(50, 3, seed=7)
    assert set(random_partition(50, 3, seed=7)) <= {1, 2, 3}
    with pytest.raises(HardnessError):
        random_partition(3, 0, seed=1)


def test_random_partition_concentration():
    n = 10_000
    inside = 0
    for seed in range(100):
        ones = sum(1 for b in random_partition(n, 2, seed) if b == 1)
        inside += abs(ones - n / 2) <= 3 * np.sqrt(n)
    assert inside >= 99
