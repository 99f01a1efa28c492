"""Value oracles over labelings.

Algorithms only touch instances through :meth:`ValueOracle.evaluate`.
Families whose values are integers (cut sums with integer weights, coverage
with integer weights, the hardness functions) set ``integral = True``; they
compute in integer arithmetic and widen to ``float`` on return, so equality
checks on them are exact.
"""
from __future__ import annotations

import threading
from typing import Callable, Sequence

import numpy as np

from .labeling import Labeling, LabelingError


class OracleError(ValueError):
    """Invalid oracle construction or evaluation."""


class ValueOracle:
    """Nonnegative function on ``{0, ..., k}^V`` accessed by evaluation only.

    Subclasses implement ``_value(labels)`` on a plain label tuple.
    ``known_monotone`` is ``True``/``False`` when the family settles the
    question by construction, ``None`` when only a checker can tell.
    """

    k: int
    n: int
    integral: bool = False
    known_monotone: bool | None = None

    def evaluate(self, x: Labeling) -> float:
        if x.k != self.k or len(x.labels) != self.n:
            raise LabelingError(
                f"labeling (n={len(x.labels)}, k={x.k}) does not match oracle (n={self.n}, k={self.k})")
        value = self._value(x.labels)
        if value < 0:
            raise OracleError(f"negative value {value} at {x}")
        return float(value)

    __call__ = evaluate

    def extensions(self, x: Labeling, e: int, base: float | None = None) -> list[float]:
        """``[f(x with e -> i) for i in 1..k]`` for an unassigned ``e``; ``k`` queries.

        ``base`` is ``f(x)`` when the caller already knows it; families with a
        cheap local update use it, the default ignores it.
        """
        if x.labels[e]:
            raise LabelingError(f"element {e} already carries label {x.labels[e]}")
        return [self.evaluate(x.assign(e, i)) for i in range(1, self.k + 1)]

    def marginal(self, x: Labeling, e: int, i: int) -> float:
        """``f(x with e -> i) - f(x)``; costs exactly two evaluations."""
        return marginal(self, x, e, i)

    def _value(self, labels: tuple[int, ...]) -> float | int:
        raise NotImplementedError


def marginal(oracle: ValueOracle, x: Labeling, e: int, i: int) -> float:
    # Labeling.assign rejects an assigned e or an out-of-range i before any query.
    raised = x.assign(e, i)
    return oracle.evaluate(raised) - oracle.evaluate(x)


def _is_integer(v) -> bool:
    return float(v).is_integer()


class TableOracle(ValueOracle):
    """Explicit value table indexed by :func:`~ksubmod.labeling.encode`."""

    def __init__(self, k: int, n: int, values: Sequence[float]):
        if k < 1 or n < 0:
            raise OracleError(f"bad table shape k={k}, n={n}")
        values = np.asarray(values, dtype=float)
        if values.shape != ((k + 1) ** n,):
            raise OracleError(f"table for k={k}, n={n} needs {(k + 1) ** n} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise OracleError("table contains non-finite values")
        bad = np.flatnonzero(values < 0)
        if bad.size:
            raise OracleError(f"negative table value {values[bad[0]]} at index {bad[0]}")
        self.k, self.n = k, n
        self.values = values
        self.values.setflags(write=False)
        self.integral = bool(np.all(np.mod(values, 1) == 0))

    def _value(self, labels):
        radix = self.k + 1
        index = 0
        for v in reversed(labels):
            index = index * radix + v
        return self.values[index]

    @classmethod
    def from_oracle(cls, oracle: ValueOracle) -> TableOracle:
        """Tabulate a small oracle (enumerates all ``(k+1)^n`` labelings)."""
        from .checkers import tabulate

        table = cls(oracle.k, oracle.n, tabulate(oracle))
        table.integral = oracle.integral
        table.known_monotone = oracle.known_monotone
        return table


class FunctionOracle(ValueOracle):
    """Wraps a Python callable on label tuples."""

    def __init__(self, k: int, n: int, fn: Callable[[tuple[int, ...]], float],
                 integral: bool = False, known_monotone: bool | None = None):
        self.k, self.n = k, n
        self.fn = fn
        self.integral = integral
        self.known_monotone = known_monotone

    def _value(self, labels):
        return self.fn(labels)


class CutSumOracle(ValueOracle):
    """``h'(X_1..X_k) = sum_i cut(X_i)`` for an undirected weighted graph.

    The cut function is symmetric submodular, so ``h'`` is k-submodular;
    maximizing it over partitions is weighted Max-k-cut.
    """

    def __init__(self, k: int, n: int, edges: Sequence[Sequence[float]]):
        if k < 1 or n < 0:
            raise OracleError(f"bad shape k={k}, n={n}")
        parsed = []
        for idx, edge in enumerate(edges):
            if len(edge) != 3:
                raise OracleError(f"edge {idx}: expected [u, v, w], got {list(edge)}")
            u, v, w = edge
            if int(u) != u or int(v) != v or not (0 <= u < n and 0 <= v < n):
                raise OracleError(f"edge {idx}: endpoints must be vertex ids in 0..{n - 1}")
            if u == v:
                raise OracleError(f"edge {idx}: self-loop at vertex {u}")
            if not np.isfinite(w) or w < 0:
                raise OracleError(f"edge {idx}: weight must be finite and nonnegative, got {w}")
            w = int(w) if _is_integer(w) else float(w)
            parsed.append((int(u), int(v), w))
        self.k, self.n = k, n
        self.edges = tuple(parsed)
        self.integral = all(isinstance(w, int) for _, _, w in parsed)
        self.known_monotone = True if all(w == 0 for _, _, w in parsed) else False
        adjacency = [[] for _ in range(n)]
        for u, v, w in parsed:
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        self.adjacency = tuple(tuple(nbrs) for nbrs in adjacency)

    def extensions(self, x: Labeling, e: int, base: float | None = None) -> list[float]:
        if base is None or x.k != self.k or len(x.labels) != self.n:
            return super().extensions(x, e, base)
        if x.labels[e]:
            raise LabelingError(f"element {e} already carries label {x.labels[e]}")
        labels = x.labels
        # an edge to a neighbour labelled b contributes (b != 0) with e unassigned
        # and (b != i) * (1 + (b != 0)) once e carries label i
        unlabelled = 0
        by_label = [0] * (self.k + 1)
        for v, w in self.adjacency[e]:
            b = labels[v]
            by_label[b] += w
            if b == 0:
                unlabelled += w
        total = sum(by_label)
        labelled = total - unlabelled
        # sum over neighbours of (b != i)(1 + (b != 0)) = unlabelled + 2 (labelled - by_label[i])
        return [float(base + unlabelled + 2 * (labelled - by_label[i]) - labelled)
                for i in range(1, self.k + 1)]

    def _value(self, labels):
        total = 0
        for u, v, w in self.edges:
            a = labels[u]
            b = labels[v]
            if a != b:
                # crosses cut(X_a) and cut(X_b); a zero endpoint crosses only one
                total += w * ((a != 0) + (b != 0))
        return total


class SetSumOracle(ValueOracle):
    """``h'(X_1..X_k) = sum_i g(X_i)`` for an arbitrary set function ``g``."""

    def __init__(self, k: int, n: int, g: Callable[[frozenset[int]], float], integral: bool = False):
        self.k, self.n = k, n
        self.g = g
        self.integral = integral

    def _value(self, labels):
        return sum(self.g(frozenset(e for e, v in enumerate(labels) if v == i))
                   for i in range(1, self.k + 1))


class WelfareOracle(ValueOracle):
    """``h(X_1..X_k) = sum_i g_i(X_i)`` with weighted-coverage valuations ``g_i``.

    ``covers[i][e]`` lists the items of universe ``i`` that element ``e``
    covers; ``universe_weights[i][u]`` is the weight of item ``u``.
    """

    def __init__(self, k: int, n: int, universe_weights: Sequence[Sequence[float]],
                 covers: Sequence[Sequence[Sequence[int]]]):
        if len(universe_weights) != k or len(covers) != k:
            raise OracleError(f"welfare instance needs exactly k={k} valuations")
        masks = []
        weights = []
        for i in range(k):
            ws = list(universe_weights[i])
            for u, w in enumerate(ws):
                if not np.isfinite(w) or w < 0:
                    raise OracleError(f"valuation {i}: weight of item {u} must be nonnegative, got {w}")
            if len(covers[i]) != n:
                raise OracleError(f"valuation {i}: expected covers for {n} elements, got {len(covers[i])}")
            row = []
            for e, items in enumerate(covers[i]):
                mask = 0
                for u in items:
                    if int(u) != u or not 0 <= u < len(ws):
                        raise OracleError(f"valuation {i}, element {e}: item {u} outside universe of size {len(ws)}")
                    mask |= 1 << int(u)
                row.append(mask)
            masks.append(tuple(row))
            weights.append(tuple(int(w) if _is_integer(w) else float(w) for w in ws))
        self.k, self.n = k, n
        self.masks = tuple(masks)
        self.weights = tuple(weights)
        self.integral = all(isinstance(w, int) for ws in weights for w in ws)
        self.known_monotone = True

    def _value(self, labels):
        covered = [0] * self.k
        for e, v in enumerate(labels):
            if v:
                covered[v - 1] |= self.masks[v - 1][e]
        total = 0
        for ws, mask in zip(self.weights, covered):
            while mask:
                low = mask & -mask
                total += ws[low.bit_length() - 1]
                mask ^= low
        return total


class CountingOracle(ValueOracle):
    """Counts (and optionally records) every evaluation of a wrapped oracle."""

    def __init__(self, inner: ValueOracle, record: bool = False):
        self.inner = inner
        self.k, self.n = inner.k, inner.n
        self.integral = inner.integral
        self.known_monotone = inner.known_monotone
        self.record = record
        self.queries: list[Labeling] = []
        self._count = 0
        self._lock = threading.Lock()

    def evaluate(self, x: Labeling) -> float:
        value = self.inner.evaluate(x)
        with self._lock:
            self._count += 1
            if self.record:
                self.queries.append(x)
        return value

    __call__ = evaluate

    def extensions(self, x: Labeling, e: int, base: float | None = None) -> list[float]:
        values = self.inner.extensions(x, e, base)
        with self._lock:
            self._count += len(values)
            if self.record:
                self.queries.extend(x.assign(e, i) for i in range(1, self.k + 1))
        return values

    @property
    def count(self) -> int:
        return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0
            self.queries = []


def wrap_counting(oracle: ValueOracle, record: bool = False) -> CountingOracle:
    return CountingOracle(oracle, record=record)
