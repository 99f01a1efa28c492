"""Seeded multi-trial runs, per-step audits and the hardness replay."""
from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from ..checkers import (CheckReport, brute_force_max, check_alpha_bisubmodular, check_ksubmodular,
                        check_monotone, is_enumerable, tabulate)
from ..hardness import HardnessOracle, HardnessParams, eval_f, is_unbalanced
from ..oracles import CountingOracle, TableOracle, ValueOracle
from ..solvers import (AuditRecord, Monotone, NonMonotone, Skew, audit_steps, bound_for,
                       run_greedy, skew_simple)
from ..solvers.greedy import _as_alpha

ALGORITHMS = ("nonmonotone", "monotone", "skew-greedy", "skew-simple", "skew-combined")
SKEW_ALGORITHMS = ALGORITHMS[2:]


class ConfigError(ValueError):
    """Invalid run configuration, or an instance the configuration cannot run on."""


class VerificationError(RuntimeError):
    """The instance fails the property the algorithm's guarantee needs."""

    def __init__(self, report: CheckReport):
        super().__init__(f"instance fails {report.property}: witness {report.witness}")
        self.report = report


class AuditViolation(RuntimeError):
    """A greedy step broke the per-step inequality."""

    def __init__(self, trial: int, record: AuditRecord):
        super().__init__(f"trial {trial}, step {record.step} (element {record.element}): "
                         f"lhs {float(record.lhs)!r} > rhs {float(record.rhs)!r}")
        self.trial = trial
        self.record = record


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    trials: int = 1
    seed: int = 0
    order: str = "input"
    audit: bool = False
    audit_c: Fraction | float | None = None
    alpha: Fraction | None = None
    workers: int = 1
    allow_unverified: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if self.order not in ("input", "shuffled"):
            raise ConfigError(f"order must be 'input' or 'shuffled', got {self.order!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.algorithm in SKEW_ALGORITHMS and self.alpha is None:
            raise ConfigError(f"{self.algorithm} needs alpha")
        if self.alpha is not None:
            try:
                object.__setattr__(self, "alpha", _as_alpha(self.alpha))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if self.audit and self.algorithm == "skew-simple":
            raise ConfigError("skew-simple has no per-step audit")
        if self.audit and self.algorithm in SKEW_ALGORITHMS and self.alpha == 0 and self.audit_c is None:
            raise ConfigError("audit constant diverges at alpha = 0; pass an explicit constant")

    def strategy(self):
        if self.algorithm == "nonmonotone":
            return NonMonotone()
        if self.algorithm == "monotone":
            return Monotone()
        return Skew(self.alpha)


@dataclass(frozen=True)
class TrialStats:
    instance: str
    algorithm: str
    k: int
    n: int
    trials: int
    seed: int
    values: tuple[float, ...]
    mean: float
    std: float
    ci99: float
    opt: float | None
    ratio: float | None
    bound: Fraction | float
    queries: int
    verified: bool
    decreasing_traces: int = 0   # greedy traces whose value ever went down

    def meets_bound(self) -> bool:
        """``mean >= bound * OPT - ci99``; vacuous when OPT is unknown or zero."""
        if self.opt is None or self.opt <= 0:
            return True
        return self.mean >= float(self.bound) * self.opt - self.ci99


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per (master seed, trial index), whatever the scheduling."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def verification_checks(oracle: ValueOracle, config: RunConfig, values=None) -> list[CheckReport]:
    """Desk-scale checks backing the chosen algorithm's guarantee."""
    if config.algorithm == "nonmonotone":
        return [check_ksubmodular(oracle, values)]
    if config.algorithm == "monotone":
        return [check_ksubmodular(oracle, values), check_monotone(oracle, values)]
    if oracle.k != 2:
        raise ConfigError(f"{config.algorithm} needs k = 2, got k = {oracle.k}")
    return [check_alpha_bisubmodular(oracle, config.alpha, values)]


def _single_run(oracle: ValueOracle, config: RunConfig, rng):
    """One trial; returns the labeling and the greedy trace (None for skew-simple)."""
    order = rng.permutation(oracle.n) if config.order == "shuffled" else None
    if config.algorithm == "skew-simple":
        return skew_simple(oracle, rng, order), None
    solution, trace = run_greedy(oracle, config.strategy(), order, rng)
    if config.algorithm == "skew-combined":
        alternative = skew_simple(oracle, rng, order)
        if oracle.evaluate(alternative) > oracle.evaluate(solution):
            solution = alternative
    return solution, trace


def run_trials(oracle: ValueOracle, config: RunConfig, name: str = "instance") -> TrialStats:
    """Run ``config.trials`` seeded trials and summarize them.

    Instances small enough to enumerate are verified against the algorithm's
    requirement and solved exactly for OPT; larger ones need
    ``allow_unverified`` and are reported without OPT.  Per-trial streams
    depend only on ``(seed, trial)``, so the result does not depend on
    ``workers``.
    """
    enumerable = is_enumerable(oracle.n, oracle.k)
    if config.algorithm in SKEW_ALGORITHMS and oracle.k != 2:
        raise ConfigError(f"{config.algorithm} needs k = 2, got k = {oracle.k}")
    verified = False
    opt = None
    reference = None
    if enumerable:
        values = tabulate(oracle)
        failures = [r for r in verification_checks(oracle, config, values) if not r.passed]
        if failures and not config.allow_unverified:
            raise VerificationError(failures[0])
        verified = not failures
        opt = brute_force_max(oracle, values=values).optimum
        # the audit compares against a maximizer with full support
        reference = brute_force_max(oracle, partitions_only=True, values=values).maximizers[0]
        # table lookups are far cheaper than re-running the defining formula
        table = TableOracle(oracle.k, oracle.n, values)
        table.integral = oracle.integral
        table.known_monotone = oracle.known_monotone
        oracle = table
    elif not config.allow_unverified:
        raise ConfigError(f"instance with n={oracle.n}, k={oracle.k} is too large to verify; "
                          "pass allow_unverified to run it anyway")
    elif config.audit:
        raise ConfigError("audit needs an enumerable instance to find the reference optimum")

    # the audit is a deterministic function of the visited (element, choice) path
    audited: dict[tuple, AuditRecord | None] = {}

    def one(trial: int) -> tuple[float, int, bool]:
        rng = trial_rng(config.seed, trial)
        counted = CountingOracle(oracle)
        solution, trace = _single_run(counted, config, rng)
        queries = counted.count
        if config.audit and trace is not None:
            path = tuple((step.element, step.choice) for step in trace.steps)
            if path not in audited:
                records = audit_steps(oracle, trace, reference, config.audit_c)
                audited[path] = next((r for r in records if r.flagged), None)
            if audited[path] is not None:
                raise AuditViolation(trial, audited[path])
        decreasing = trace is not None and any(b < a for a, b in zip(trace.values, trace.values[1:]))
        return oracle.evaluate(solution), queries, decreasing

    if config.workers == 1:
        results = [one(t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(one, range(config.trials)))
    values_out = tuple(v for v, _, _ in results)
    stats = summarize(name, config, oracle.k, oracle.n, values_out, sum(q for _, q, _ in results),
                      opt, verified)
    return replace(stats, decreasing_traces=sum(d for _, _, d in results))


def summarize(name: str, config: RunConfig, k: int, n: int, values: tuple[float, ...], queries: int,
              opt: float | None, verified: bool) -> TrialStats:
    T = len(values)
    mean = statistics.fmean(values)
    # the mean of identical floats can drift by an ulp; keep it inside [min, max]
    mean = min(max(mean, min(values)), max(values))
    std = statistics.stdev(values) if T > 1 else 0.0
    ratio = mean / opt if opt is not None and opt > 0 else None
    return TrialStats(name, config.algorithm, k, n, T, config.seed, values, mean, std,
                      3 * std / math.sqrt(T), opt, ratio,
                      bound_for(config.algorithm, k, config.alpha if config.alpha is not None else 1),
                      queries, verified)


@dataclass(frozen=True)
class ReplayRun:
    trial: int
    queries: int
    unbalanced_count: int
    distinguished: bool


@dataclass(frozen=True)
class ReplayReport:
    params: HardnessParams
    algorithm: str
    runs: tuple[ReplayRun, ...]

    @property
    def fraction_distinguished(self) -> float:
        return sum(r.distinguished for r in self.runs) / len(self.runs) if self.runs else 0.0


def replay_hardness(params: HardnessParams, config: RunConfig) -> ReplayReport:
    """Run the algorithm against ``g_P`` and inspect every query it made.

    A query is *distinguishing* when ``f`` and ``g_P`` disagree on it; that
    can only happen at unbalanced labelings.
    """
    if params.partition is None:
        raise ConfigError("replay needs a hidden partition")
    oracle = HardnessOracle(params, hidden=True)
    runs = []
    for trial in range(config.trials):
        rng = trial_rng(config.seed, trial)
        counted = CountingOracle(oracle, record=True)
        _single_run(counted, config, rng)
        unbalanced = 0
        distinguished = False
        for x in counted.queries:
            if is_unbalanced(params, x):
                unbalanced += 1
                if not distinguished and oracle.evaluate(x) != eval_f(params, x):
                    distinguished = True
        runs.append(ReplayRun(trial, counted.count, unbalanced, distinguished))
    return ReplayReport(params, config.algorithm, tuple(runs))
