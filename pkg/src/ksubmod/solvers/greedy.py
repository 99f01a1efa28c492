"""Randomized greedy framework and its per-step audit.

The greedy visits the elements once, in a fixed order.  For the current
element ``e`` it evaluates the gains ``y_i = f(s with e -> i) - f(s)`` for
every coordinate, asks the strategy for a distribution ``p`` and assigns
``e`` to a coordinate drawn from ``p`` by inverse CDF with a single uniform
draw.  Queries per run: one evaluation of ``f(0)`` plus ``k`` per element.

The audit replays a trace against a full-support reference labeling ``o``
and evaluates, step by step,

    sum_i (a_{i*} - a_i) p_i  <=  c * sum_i y_i p_i

where ``i* = o(e)``, ``a_i`` is the gain of ``e -> i`` at ``t`` (``o``
overwritten by the current solution, with ``e`` cleared) and ``c`` is the
strategy's constant.  If the inequality holds at every step then
``E[f(s)] >= f(o) / (1 + c)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..labeling import Labeling, clear, overwrite
from ..oracles import ValueOracle
from .distributions import dist_monotone, dist_nonmonotone, dist_skew


class SolverError(ValueError):
    pass


class PreconditionError(SolverError):
    """The oracle does not satisfy what the strategy requires."""


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def _as_alpha(alpha) -> Fraction:
    try:
        alpha = Fraction(alpha)
    except (TypeError, ValueError) as exc:
        raise SolverError(f"bad alpha {alpha!r}") from exc
    if not 0 <= alpha <= 1:
        raise SolverError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


class NonMonotone:
    """Geometric distribution over positive gains (1/2-approximation)."""

    name = "nonmonotone"

    def __init__(self, eps: float = 0.0):
        self.eps = eps

    def distribution(self, y, exact: bool = False):
        return dist_nonmonotone(y, eps=self.eps, exact=exact)

    def audit_constant(self, k: int) -> Fraction:
        return Fraction(1)

    def check(self, oracle: ValueOracle) -> None:
        pass


class Monotone:
    """Gains raised to the power ``k-1``, normalized (k/(2k-1)-approximation)."""

    name = "monotone"

    def distribution(self, y, exact: bool = False):
        return dist_monotone(y, exact=exact)

    def audit_constant(self, k: int) -> Fraction:
        return 1 - Fraction(1, k)

    def check(self, oracle: ValueOracle) -> None:
        if oracle.known_monotone is False:
            raise PreconditionError(f"{type(oracle).__name__} is not monotone; the monotone strategy needs it")


class Skew:
    """Tilted proportional choice for alpha-bisubmodular functions (k = 2)."""

    name = "skew-greedy"

    def __init__(self, alpha):
        self.alpha = _as_alpha(alpha)

    def distribution(self, y, exact: bool = False):
        return dist_skew(y[0], y[1], self.alpha, exact=exact)

    def audit_constant(self, k: int) -> Fraction | float | None:
        """``(1 + alpha) / (2 sqrt(alpha))``; None at alpha = 0 where it diverges."""
        if self.alpha == 0:
            return None
        root = _sqrt_fraction(self.alpha)
        if root is not None:
            return (1 + self.alpha) / (2 * root)
        return float(1 + self.alpha) / (2 * math.sqrt(self.alpha))

    def check(self, oracle: ValueOracle) -> None:
        if oracle.k != 2:
            raise PreconditionError(f"skew strategy needs k = 2, got k = {oracle.k}")


STRATEGIES = {"nonmonotone": NonMonotone, "monotone": Monotone}


@dataclass(frozen=True)
class GreedyStep:
    element: int
    marginals: tuple[float, ...]
    probabilities: tuple[float, ...]
    choice: int
    value: float


@dataclass
class GreedyTrace:
    k: int
    n: int
    strategy: object
    order: tuple[int, ...]
    initial_value: float | None
    steps: list[GreedyStep] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        head = [] if self.initial_value is None else [self.initial_value]
        return head + [s.value for s in self.steps]

    @property
    def query_count(self) -> int:
        return (1 if self.steps else 0) + self.k * len(self.steps)

    def solution(self, upto: int | None = None) -> Labeling:
        """``s^(j)``: the partial labeling after the first ``upto`` steps."""
        labels = [0] * self.n
        for step in self.steps[:upto]:
            labels[step.element] = step.choice
        return Labeling(tuple(labels), self.k)


def make_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample(p: Sequence[float], u: float) -> int:
    """Inverse CDF over coordinates ``1..k``; never returns a zero-mass coordinate."""
    acc = 0.0
    last = 0
    for i, pi in enumerate(p, start=1):
        if pi > 0:
            acc += pi
            last = i
            if u < acc:
                return i
    return last


def run_greedy(oracle: ValueOracle, strategy, order: Sequence[int] | None = None,
               rng=None) -> tuple[Labeling, GreedyTrace]:
    """One pass of the randomized greedy over ``order`` (default: 0..n-1)."""
    n, k = oracle.n, oracle.k
    order = tuple(range(n)) if order is None else tuple(int(e) for e in order)
    if sorted(order) != list(range(n)):
        raise SolverError(f"order must be a permutation of 0..{n - 1}")
    strategy.check(oracle)
    rng = make_rng(rng)
    labels = [0] * n
    trace = GreedyTrace(k, n, strategy, order, None)
    if n == 0:
        return Labeling((), k), trace
    current = oracle.evaluate(Labeling(tuple(labels), k))
    trace.initial_value = current
    for e in order:
        raised = oracle.extensions(Labeling(tuple(labels), k), e, current)
        gains = [v - current for v in raised]
        p = strategy.distribution(gains)
        choice = sample(p, rng.random())
        labels[e] = choice
        current = raised[choice - 1]
        trace.steps.append(GreedyStep(e, tuple(gains), tuple(float(v) for v in p), choice, current))
    return Labeling(tuple(labels), k), trace


@dataclass(frozen=True)
class AuditRecord:
    step: int
    element: int
    reference: Labeling       # o^(j-1)
    interleaved: Labeling     # o^(j)
    cleared: Labeling         # t^(j-1)
    marginals: tuple          # y
    reference_gains: tuple    # a
    probabilities: tuple
    target: int               # i* = o(e)
    lhs: float
    rhs: float
    flagged: bool


def audit_steps(oracle: ValueOracle, trace: GreedyTrace, o: Labeling, c=None,
                 exact: bool | None = None) -> list[AuditRecord]:
    """Per-step check of ``sum (a_{i*} - a_i) p_i <= c sum y_i p_i``.

    ``c`` defaults to the trace strategy's constant.  Integer-valued oracles
    with rational ``c`` are audited in exact arithmetic (``tau = 0``), the
    distribution being recomputed exactly from the recorded gains; otherwise
    ``tau = 1e-9 * (1 + max |value|)``.
    """
    if not o.is_partition():
        raise SolverError("reference labeling must have full support")
    if o.k != trace.k or o.n != trace.n:
        raise SolverError("reference labeling does not match the trace")
    if c is None:
        c = trace.strategy.audit_constant(trace.k)
        if c is None:
            raise SolverError("audit constant undefined for this strategy (alpha = 0)")
    if exact is None:
        exact = oracle.integral and isinstance(c, (int, Fraction))
    k = trace.k
    num = Fraction if exact else float
    c = num(c)
    records = []
    s = Labeling.zeros(trace.n, k)
    o_prev = o
    for j, step in enumerate(trace.steps, start=1):
        e = step.element
        s_next = Labeling(tuple(step.choice if idx == e else v for idx, v in enumerate(s.labels)), k)
        o_j = overwrite(o, s_next)
        t_prev = clear(o_j, e)
        base = oracle.evaluate(t_prev)
        a = tuple(num(oracle.evaluate(t_prev.assign(e, i))) - num(base) for i in range(1, k + 1))
        y = tuple(num(v) for v in step.marginals)
        if exact:
            p = trace.strategy.distribution(y, exact=True)
        else:
            p = step.probabilities
        target = o[e]
        lhs = sum((a[target - 1] - a[i]) * p[i] for i in range(k))
        rhs = c * sum(y[i] * p[i] for i in range(k))
        if exact:
            flagged = lhs > rhs
        else:
            scale = max([abs(v) for v in a + y] + [abs(base)])
            flagged = lhs > rhs + 1e-9 * (1 + scale)
        records.append(AuditRecord(j, e, o_prev, o_j, t_prev, y, a, tuple(p), target,
                                   lhs, rhs, flagged))
        s = s_next
        o_prev = o_j
    return records
