"""Query-complexity hardness instances for monotone k-submodular maximization.

Two integer-valued functions on ``{0..k}^V``:

* ``f(x) = (k+1+2k eps) n^2 - (k-1) n0^2 - 2(1+k eps) n n0`` where ``n0`` is
  the number of unassigned elements;
* ``g_P(x) = f(x) + sum_{a<b} max(|d_a - d_b| - eps n, 0)^2`` for a hidden
  k-partition ``P = (A_1..A_k)``, with ``d_j`` the cyclic diagonal sums of
  the counts ``c_{i,j} = |X_i & A_j|``.

On balanced queries (all ``|d_a - d_b| < eps n``) the two agree, so an
algorithm that never issues an unbalanced query learns nothing about ``P``;
yet ``max g_P`` exceeds ``max f`` by ``(k-1)(n - eps n)^2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .labeling import Labeling, LabelingError
from .oracles import ValueOracle


class HardnessError(ValueError):
    pass


@dataclass(frozen=True)
class HardnessParams:
    k: int
    n: int
    eps: Fraction
    partition: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        eps = Fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        if self.k < 1 or self.n < 0:
            raise HardnessError(f"bad shape k={self.k}, n={self.n}")
        if eps <= 0:
            raise HardnessError(f"eps must be positive, got {eps}")
        if (eps * self.n).denominator != 1:
            raise HardnessError(f"eps*n must be an integer, got {eps} * {self.n} = {eps * self.n}")
        if self.partition is not None:
            blocks = tuple(int(b) for b in self.partition)
            if len(blocks) != self.n:
                raise HardnessError(f"partition has {len(blocks)} entries, expected {self.n}")
            if any(not 1 <= b <= self.k for b in blocks):
                raise HardnessError(f"partition blocks must lie in 1..{self.k}")
            object.__setattr__(self, "partition", blocks)

    @property
    def eps_n(self) -> int:
        return int(self.eps * self.n)

    def with_partition(self, partition: Sequence[int]) -> HardnessParams:
        return HardnessParams(self.k, self.n, self.eps, tuple(partition))

    def aligned(self) -> Labeling:
        """The labeling ``X_i = A_i``."""
        return Labeling(_require_partition(self), self.k)


def _require_partition(params: HardnessParams) -> tuple[int, ...]:
    if params.partition is None:
        raise HardnessError("hidden partition required")
    return params.partition


def _check(params: HardnessParams, x: Labeling) -> None:
    if x.k != params.k or len(x) != params.n:
        raise LabelingError(f"labeling (n={len(x)}, k={x.k}) does not match params (n={params.n}, k={params.k})")


def n_zero(x: Labeling) -> int:
    return sum(1 for v in x.labels if v == 0)


def eval_f(params: HardnessParams, x: Labeling) -> int:
    _check(params, x)
    k, n, en = params.k, params.n, params.eps_n
    n0 = n_zero(x)
    # every term is an integer once eps*n is
    return (k + 1) * n * n + 2 * k * en * n - (k - 1) * n0 * n0 - 2 * n * n0 - 2 * k * en * n0


def f_marginal(params: HardnessParams, n0: int) -> int:
    """Gain of ``f`` from assigning one element when ``n0`` are unassigned."""
    k, n, en = params.k, params.n, params.eps_n
    return 2 * (k - 1) * n0 - (k - 1) + 2 * n + 2 * k * en


def d_vector(params: HardnessParams, x: Labeling) -> tuple[int, ...]:
    """``d_j = sum_i c_{i, j+i-1}`` with indices mod k (0 read as k)."""
    _check(params, x)
    blocks = _require_partition(params)
    k = params.k
    d = [0] * k
    for label, block in zip(x.labels, blocks):
        if label:
            # an element of A_b in X_i counts towards d_j with b = j + i - 1 (mod k)
            d[(block - label) % k] += 1
    return tuple(d)


def penalty(params: HardnessParams, d: Sequence[int]) -> int:
    en = params.eps_n
    total = 0
    for a in range(len(d)):
        for b in range(a + 1, len(d)):
            excess = abs(d[a] - d[b]) - en
            if excess > 0:
                total += excess * excess
    return total


def eval_g(params: HardnessParams, x: Labeling) -> int:
    return eval_f(params, x) + penalty(params, d_vector(params, x))


def is_unbalanced(params: HardnessParams, x: Labeling) -> bool:
    d = d_vector(params, x)
    if len(d) < 2:
        return False
    return max(d) - min(d) >= params.eps_n


def random_partition(n: int, k: int, seed) -> tuple[int, ...]:
    """Each element joins one of ``k`` blocks independently and uniformly."""
    if k < 1:
        raise HardnessError(f"k must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    return tuple(int(b) for b in rng.integers(1, k + 1, size=n))


def f_max(params: HardnessParams) -> int:
    return (params.k + 1) * params.n ** 2 + 2 * params.k * params.eps_n * params.n


def g_aligned(params: HardnessParams) -> int:
    """``g_P`` at ``X_i = A_i``: ``f_max + (k-1)(n - eps n)^2``."""
    return f_max(params) + (params.k - 1) * max(params.n - params.eps_n, 0) ** 2


class HardnessOracle(ValueOracle):
    """``f`` (``hidden=False``) or ``g_P`` (``hidden=True``) as a value oracle."""

    integral = True
    known_monotone = True

    def __init__(self, params: HardnessParams, hidden: bool):
        if hidden:
            _require_partition(params)
        self.params = params
        self.hidden = hidden
        self.k, self.n = params.k, params.n

    def _value(self, labels):
        x = Labeling(labels, self.k)
        return eval_g(self.params, x) if self.hidden else eval_f(self.params, x)
