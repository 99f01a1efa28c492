from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ksubmod.checkers import brute_force_max, check_ksubmodular
from ksubmod.harness.instances import _ksubmodular_proposal
from ksubmod.labeling import Labeling, overwrite
from ksubmod.oracles import CountingOracle, CutSumOracle, FunctionOracle, TableOracle, WelfareOracle
from ksubmod.solvers import (Monotone, NonMonotone, PreconditionError, Skew, SolverError,
                             audit_steps, run_greedy)

TRIANGLE = CutSumOracle(2, 3, [[0, 1, 1], [1, 2, 1], [0, 2, 1]])


def linear_first_block(n):
    return FunctionOracle(2, n, lambda labels: 2 * sum(1 for v in labels if v == 1), integral=True,
                          known_monotone=True)


def test_linear_function_forces_argmax():
    s, trace = run_greedy(linear_first_block(2), NonMonotone(), rng=0)
    assert s == Labeling((1, 1), 2)
    assert trace.values == [0, 2, 4]
    assert all(step.probabilities == (1.0, 0.0) for step in trace.steps)


def test_zero_function_gives_a_partition():
    zero = TableOracle(3, 3, [0] * 64)
    s, trace = run_greedy(zero, NonMonotone(), rng=5)
    assert s.is_partition()
    assert zero.evaluate(s) == 0
    assert all(step.probabilities == (1.0, 0.0, 0.0) for step in trace.steps)


def test_monotone_strategy_rejects_cut_sums():
    with pytest.raises(PreconditionError):
        run_greedy(TRIANGLE, Monotone(), rng=0)


def test_skew_strategy_needs_k2():
    with pytest.raises(PreconditionError):
        run_greedy(TableOracle(3, 1, [0, 1, 1, 1]), Skew(1), rng=0)


def test_order_validation():
    with pytest.raises(SolverError):
        run_greedy(TRIANGLE, NonMonotone(), order=[0, 0, 1])
    s, trace = run_greedy(TRIANGLE, NonMonotone(), order=[2, 0, 1], rng=1)
    assert [step.element for step in trace.steps] == [2, 0, 1]


def test_determinism_given_seed():
    a = run_greedy(TRIANGLE, NonMonotone(), rng=42)
    b = run_greedy(TRIANGLE, NonMonotone(), rng=42)
    assert a[0] == b[0]
    assert a[1].steps == b[1].steps


def test_query_count_contract():
    for n, k in [(0, 2), (1, 1), (3, 2), (4, 3)]:
        counted = CountingOracle(TableOracle(k, n, np.arange((k + 1) ** n)))
        _, trace = run_greedy(counted, NonMonotone(), rng=0)
        assert counted.count == trace.query_count == (0 if n == 0 else 1 + n * k)


def test_audit_zero_function():
    zero = TableOracle(2, 2, [0] * 9)
    _, trace = run_greedy(zero, NonMonotone(), rng=0)
    for c in (0, 1, 5):
        records = audit_steps(zero, trace, Labeling((2, 1), 2), c)
        assert all(r.lhs == 0 and r.rhs == 0 and not r.flagged for r in records)


def test_audit_needs_full_support():
    _, trace = run_greedy(TRIANGLE, NonMonotone(), rng=0)
    with pytest.raises(SolverError):
        audit_steps(TRIANGLE, trace, Labeling((1, 0, 2), 2))


def test_audit_flags_a_too_small_constant():
    _, trace = run_greedy(TRIANGLE, NonMonotone(), rng=0)
    o = brute_force_max(TRIANGLE, partitions_only=True).maximizers[0]
    records = audit_steps(TRIANGLE, trace, o, c=0)
    assert any(r.flagged for r in records) or all(r.lhs <= 0 for r in records)


def check_audit_invariants(oracle, trace, o, records):
    assert records[0].reference == o
    assert records[-1].interleaved == trace.solution()
    for j, r in enumerate(records, start=1):
        assert r.interleaved == overwrite(o, trace.solution(j))
        assert r.cleared[r.element] == 0
        assert r.target == o[r.element]
        # y_i >= a_i, and both vectors pairwise monotone on k-submodular instances
        assert all(y >= a for y, a in zip(r.marginals, r.reference_gains))
        k = len(r.marginals)
        for i in range(k):
            for i2 in range(i + 1, k):
                assert r.marginals[i] + r.marginals[i2] >= 0
                assert r.reference_gains[i] + r.reference_gains[i2] >= 0
        assert not r.flagged


def random_ksubmodular(seed, k, n):
    rng = np.random.default_rng(seed)
    while True:
        t = TableOracle(k, n, _ksubmodular_proposal(rng, k, n))
        if check_ksubmodular(t).passed:
            return t


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_nonmonotone_audit_over_seeded_runs(k, n, seed):
    oracle = random_ksubmodular(seed, k, n)
    o = brute_force_max(oracle, partitions_only=True).maximizers[0]
    rng = np.random.default_rng(seed)
    for _ in range(20):
        _, trace = run_greedy(oracle, NonMonotone(), rng=rng)
        records = audit_steps(oracle, trace, o)
        check_audit_invariants(oracle, trace, o, records)
        assert all(b >= a for a, b in zip(trace.values, trace.values[1:]))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_monotone_audit_on_welfare(k, n, seed):
    rnd = np.random.default_rng(seed)
    weights = [[int(w) for w in rnd.integers(0, 4, size=3)] for _ in range(k)]
    covers = [[[u for u in range(3) if rnd.random() < 0.5] for _ in range(n)] for _ in range(k)]
    oracle = WelfareOracle(k, n, weights, covers)
    o = brute_force_max(oracle, partitions_only=True).maximizers[0]
    for _ in range(20):
        _, trace = run_greedy(oracle, Monotone(), rng=rnd)
        records = audit_steps(oracle, trace, o)
        assert records and not any(r.flagged for r in records)
        assert all(isinstance(r.lhs, Fraction) for r in records)


def test_audit_float_mode_on_fractional_weights():
    oracle = CutSumOracle(3, 4, [[0, 1, 0.5], [1, 2, 1.25], [2, 3, 0.75], [0, 3, 2.0]])
    o = brute_force_max(oracle, partitions_only=True).maximizers[0]
    for seed in range(50):
        _, trace = run_greedy(oracle, NonMonotone(), rng=seed)
        records = audit_steps(oracle, trace, o)
        assert not any(r.flagged for r in records)
        assert all(isinstance(r.lhs, float) for r in records)


def test_nonmonotone_mean_on_triangle():
    values = [TRIANGLE.evaluate(run_greedy(TRIANGLE, NonMonotone(), rng=s)[0]) for s in range(300)]
    assert np.mean(values) >= 0.5 * 4
