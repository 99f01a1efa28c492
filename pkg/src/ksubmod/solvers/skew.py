"""Algorithms for alpha-bisubmodular maximization (k = 2)."""
from __future__ import annotations

from typing import Callable, Sequence

from ..labeling import Labeling
from ..oracles import ValueOracle
from .greedy import Skew, SolverError, make_rng, run_greedy


def double_greedy(g: Callable[[frozenset[int]], float], n: int,
                  order: Sequence[int] | None = None, rng=None) -> frozenset[int]:
    """Randomized double greedy for unconstrained submodular maximization.

    Grows ``X`` from the empty set and shrinks ``Y`` from ``V``.  For each
    element, with ``a = g(X+e) - g(X)`` and ``b = g(Y-e) - g(Y)``, ``e`` joins
    ``X`` with probability ``a+ / (a+ + b+)`` (always when both are zero),
    otherwise leaves ``Y``.  One uniform draw per element.
    """
    order = tuple(range(n)) if order is None else tuple(order)
    if sorted(order) != list(range(n)):
        raise SolverError(f"order must be a permutation of 0..{n - 1}")
    rng = make_rng(rng)
    lower: frozenset[int] = frozenset()
    upper = frozenset(range(n))
    if n == 0:
        return lower
    g_lower, g_upper = g(lower), g(upper)
    for e in order:
        grown = lower | {e}
        shrunk = upper - {e}
        g_grown, g_shrunk = g(grown), g(shrunk)
        a = max(g_grown - g_lower, 0.0)
        b = max(g_shrunk - g_upper, 0.0)
        u = rng.random()
        if a + b == 0 or u < a / (a + b):
            lower, g_lower = grown, g_grown
        else:
            upper, g_upper = shrunk, g_shrunk
    return lower


def first_block_function(oracle: ValueOracle) -> Callable[[frozenset[int]], float]:
    """``f'(X) = f(X, ∅)``."""
    n = oracle.n

    def g(X: frozenset[int]) -> float:
        return oracle.evaluate(Labeling(tuple(1 if e in X else 0 for e in range(n)), 2))

    return g


def _require_k2(oracle: ValueOracle) -> None:
    if oracle.k != 2:
        raise SolverError(f"skew-bisubmodular algorithms need k = 2, got k = {oracle.k}")


def skew_simple(oracle: ValueOracle, rng=None, order: Sequence[int] | None = None) -> Labeling:
    """Better of ``(∅, V)`` and ``(Z, ∅)``, ``Z`` from double greedy on ``f'``.

    Ties go to ``(∅, V)``.
    """
    _require_k2(oracle)
    n = oracle.n
    Z = double_greedy(first_block_function(oracle), n, order, rng)
    second = Labeling((2,) * n, 2)
    first = Labeling(tuple(1 if e in Z else 0 for e in range(n)), 2)
    return first if oracle.evaluate(first) > oracle.evaluate(second) else second


def skew_combined(oracle: ValueOracle, alpha, rng=None, order: Sequence[int] | None = None) -> Labeling:
    """Better of the skew greedy and :func:`skew_simple`, run in that order on one stream."""
    _require_k2(oracle)
    rng = make_rng(rng)
    greedy_out, _ = run_greedy(oracle, Skew(alpha), order, rng)
    simple_out = skew_simple(oracle, rng, order)
    return simple_out if oracle.evaluate(simple_out) > oracle.evaluate(greedy_out) else greedy_out
