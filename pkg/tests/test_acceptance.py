"""Exit criteria, each at its stated tolerance.

Every guarantee is checked as ``mean >= rho * OPT - 3 s / sqrt(T)`` against
the brute-force optimum, with T = 2000 seeded trials per instance.  One
summary line per criterion is printed (and repeated in the terminal summary).
"""
import io
import time
from fractions import Fraction

import pytest

from ksubmod.checkers import (brute_force_max, check_characterization, check_ksubmodular,
                              check_monotone, tabulate)
from ksubmod.cli import main
from ksubmod.hardness import HardnessOracle, HardnessParams, eval_f, eval_g, is_unbalanced, random_partition
from ksubmod.harness import AuditViolation, RunConfig, generate, run_trials
from ksubmod.harness.suite import (HARDNESS_TRIPLES, SKEW_ALPHAS, characterization_tables,
                                   verified_suite)
from ksubmod.labeling import all_labelings
from ksubmod.solvers import ratio_bounds

pytestmark = pytest.mark.acceptance

T = 2000


@pytest.fixture(scope="module")
def suite():
    return verified_suite()


def _run_group(entries, config_for):
    """Run every entry; audit violations are collected rather than raised."""
    start = time.perf_counter()
    rows, violations = [], []
    for entry in entries:
        try:
            rows.append((entry, run_trials(entry.oracle(), config_for(entry), entry.name)))
        except AuditViolation as exc:
            violations.append(f"{entry.name}: {exc}")
    return rows, time.perf_counter() - start, violations


@pytest.fixture(scope="module")
def runs(suite):
    """All guarantee runs, shared by the criteria that inspect them."""
    ksub = [e for e in suite if e.ksubmodular]
    mono = [e for e in suite if e.ksubmodular and e.monotone]
    skew = [e for e in suite if e.alpha is not None]
    out = {}
    out["alg2"] = _run_group(ksub, lambda e: RunConfig("nonmonotone", trials=T, seed=11, audit=True,
                                                         audit_c=Fraction(1)))
    out["alg3"] = _run_group(mono, lambda e: RunConfig("monotone", trials=T, seed=12, audit=True,
                                                        audit_c=1 - Fraction(1, e.instance.k)))
    out["alg4"] = _run_group(skew, lambda e: RunConfig("skew-greedy", trials=T, seed=13, audit=True,
                                                        alpha=e.alpha))
    out["simple"] = _run_group(skew, lambda e: RunConfig("skew-simple", trials=T, seed=14, alpha=e.alpha))
    out["combined"] = _run_group(skew, lambda e: RunConfig("skew-combined", trials=T, seed=15, alpha=e.alpha))
    return out


def _shortfalls(rows, rho=None):
    bad = []
    for entry, stats in rows:
        bound = float(stats.bound if rho is None else rho)
        if stats.opt > 0 and stats.mean < bound * stats.opt - stats.ci99:
            bad.append(f"{entry.name}: mean {stats.mean} < {bound} * {stats.opt} - {stats.ci99}")
    return bad


def _worst(rows, rho=None):
    ratios = [(s.mean + s.ci99) / s.opt / float(s.bound if rho is None else rho)
              for _, s in rows if s.opt > 0]
    return min(ratios, default=float("nan"))


def test_criterion_1_characterization(record_criterion):
    start = time.perf_counter()
    tables = characterization_tables(300, seed=2024)
    verdicts = [check_characterization(t) for t in tables]
    elapsed = time.perf_counter() - start
    discrepancies = sum(d != l for d, l in verdicts)
    positives = sum(d for d, _ in verdicts)
    ok = len(tables) >= 200 and discrepancies == 0 and elapsed < 30
    record_criterion(1, ok, f"{len(tables)} tables ({positives} k-submodular), "
                            f"{discrepancies} discrepancies, {elapsed:.1f}s")
    assert 0 < positives < len(tables), "both verdicts must occur for the comparison to mean anything"
    assert ok


def test_criterion_2_partition_optimum(suite, record_criterion):
    mismatches = []
    unverified = [e.name for e in suite if not (e.ksubmodular or e.alpha is not None)]
    for entry in suite:
        oracle = entry.oracle()
        values = tabulate(oracle)
        full = brute_force_max(oracle, values=values)
        part = brute_force_max(oracle, partitions_only=True, values=values)
        if full.optimum != part.optimum:
            mismatches.append(f"{entry.name}: {full.optimum} vs {part.optimum}")
    ok = not mismatches and not unverified
    record_criterion(2, ok, f"{len(suite)} instances, {len(mismatches)} mismatches")
    assert not unverified, unverified
    assert not mismatches, mismatches


def test_criterion_3_nonmonotone_guarantee(runs, record_criterion):
    rows, elapsed, violations = runs["alg2"]
    bad = _shortfalls(rows)
    ok = not bad and not violations and elapsed < 60
    record_criterion(3, ok, f"{len(rows) + len(violations)} instances, T={T}, {len(violations)} audit "
                            f"violations (c=1), worst (mean+ci)/(bound*OPT) {_worst(rows):.3f}, {elapsed:.1f}s")
    assert not violations, violations
    assert not bad, bad
    assert elapsed < 60


def test_criterion_4_monotone_guarantee(runs, record_criterion):
    rows, _, violations = runs["alg3"]
    bad = _shortfalls(rows)
    families = {entry.name.split("-")[0] for entry, _ in rows}
    exact = ratio_bounds(2)["monotone"] == Fraction(2, 3)
    ok = not bad and not violations and exact and {"welfare", "hardness"} <= families
    record_criterion(4, ok, f"{len(rows) + len(violations)} instances ({', '.join(sorted(families))}), T={T}, "
                            f"{len(violations)} audit violations (c=1-1/k), worst {_worst(rows):.3f}")
    assert exact
    assert not violations, violations
    assert {"welfare", "hardness"} <= families
    assert not bad, bad


def test_criterion_5_hardness_construction(record_criterion):
    problems = []
    checked = 0
    for k, n, eps in HARDNESS_TRIPLES:
        base = HardnessParams(k, n, eps)
        f_oracle = HardnessOracle(base, hidden=False)
        for report in (check_monotone(f_oracle), check_ksubmodular(f_oracle)):
            if not report.passed:
                problems.append(f"f{(k, n, eps)}: {report.property}")
        expected_max = (k + 1 + 2 * k * eps) * n * n
        if Fraction(brute_force_max(f_oracle).optimum) != expected_max:
            problems.append(f"max f{(k, n, eps)} != {expected_max}")
        for seed in range(5):
            params = base.with_partition(random_partition(n, k, seed))
            g_oracle = HardnessOracle(params, hidden=True)
            for report in (check_monotone(g_oracle), check_ksubmodular(g_oracle)):
                if not report.passed:
                    problems.append(f"g{(k, n, eps, seed)}: {report.property}")
            expected_aligned = expected_max + (k - 1) * (n - eps * n) ** 2
            if eval_g(params, params.aligned()) != expected_aligned:
                problems.append(f"g_P(aligned){(k, n, eps, seed)} != {expected_aligned}")
            for x in all_labelings(n, k):
                if not is_unbalanced(params, x) and eval_g(params, x) != eval_f(params, x):
                    problems.append(f"balanced {x} differs for {(k, n, eps, seed)}")
            checked += 1
    ok = not problems
    record_criterion(5, ok, f"{len(HARDNESS_TRIPLES)} triples x 5 partitions ({checked} g_P), "
                            f"{len(problems)} problems")
    assert not problems, problems


def test_criterion_6_skew_greedy_guarantee(runs, record_criterion):
    rows, _, violations = runs["alg4"]
    bad = _shortfalls(rows)
    alphas = {entry.alpha for entry, _ in rows}
    ok = not bad and not violations and alphas == set(SKEW_ALPHAS)
    record_criterion(6, ok, f"{len(rows) + len(violations)} tables, alpha in {sorted(str(a) for a in alphas)}, "
                            f"T={T}, {len(violations)} audit violations (c=(1+a)/(2 sqrt a)), "
                            f"worst {_worst(rows):.3f}")
    assert alphas == set(SKEW_ALPHAS)
    assert not violations, violations
    assert not bad, bad


def test_criterion_7_skew_simple_and_combined(runs, record_criterion):
    simple_rows = runs["simple"][0]
    combined_rows = runs["combined"][0]
    bad = _shortfalls(simple_rows) + _shortfalls(combined_rows, Fraction(8, 25))
    bounds = ratio_bounds(2, Fraction(1, 16))
    exact = bounds["skew_greedy"] == Fraction(8, 25) and bounds["skew_simple"] == Fraction(8, 25)
    ok = not bad and exact
    record_criterion(7, ok, f"{len(simple_rows)} tables, simple worst {_worst(simple_rows):.3f}, "
                            f"combined vs 8/25 worst {_worst(combined_rows, Fraction(8, 25)):.3f}, "
                            f"ratio_bounds(1/16) exact 8/25: {exact}")
    assert exact
    assert not bad, bad


def test_criterion_8_monotone_traces(runs, record_criterion):
    traced = 0
    decreasing = 0
    for key in ("alg2", "alg3", "alg4", "combined"):
        for _, stats in runs[key][0]:
            traced += stats.trials
            decreasing += stats.decreasing_traces
    ok = decreasing == 0
    record_criterion(8, ok, f"{traced} greedy traces, {decreasing} with a decreasing step")
    assert decreasing == 0


def _solve(path, workers, extra=()):
    out = io.BytesIO()
    code = main(["solve", "--instance", str(path), "--workers", str(workers), *extra], out=out)
    return code, out.getvalue()


def test_criterion_9_determinism_and_scale(tmp_path, record_criterion):
    small = tmp_path / "small.json"
    small.write_text(generate("random-verified-ksubmodular", {"k": 3, "n": 3}, seed=9).to_json())
    big = tmp_path / "big.json"
    big.write_text(generate("random-cutsum", {"k": 5, "n": 50, "edge_prob": 0.5}, seed=9).to_json())
    small_args = ["--algo", "nonmonotone", "--trials", "500", "--seed", "3", "--order", "shuffled", "--audit"]
    big_args = ["--algo", "nonmonotone", "--trials", "1000", "--seed", "3", "--allow-unverified"]

    code1, one = _solve(small, 1, small_args)
    code8, eight = _solve(small, 8, small_args)
    start = time.perf_counter()
    code_big1, big_one = _solve(big, 1, big_args)
    elapsed = time.perf_counter() - start
    code_big8, big_eight = _solve(big, 8, big_args)

    identical = one == eight and big_one == big_eight
    codes = (code1, code8, code_big1, code_big8) == (0, 0, 0, 0)
    ok = identical and codes and elapsed < 10
    record_criterion(9, ok, f"1 vs 8 workers byte-identical: {identical}; "
                            f"n=50, k=5, T=1000 solve in {elapsed:.2f}s")
    assert codes
    assert identical
    assert elapsed < 10
