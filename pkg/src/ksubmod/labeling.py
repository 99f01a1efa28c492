"""Labelings of a ground set ``{0, ..., n-1}`` with labels in ``{0, 1, ..., k}``.

A labeling ``x`` is identified with the tuple of disjoint blocks
``(X_1, ..., X_k)`` where ``X_i = {e : x[e] == i}``; label 0 means the
element is unassigned.  Every operation here is pure.

Mixed-radix encoding is little-endian: element 0 is the least significant
digit, so ``encode(x) = sum(x[j] * (k+1)**j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence


class LabelingError(ValueError):
    """Malformed labeling or mismatched ground set / arity."""


@dataclass(frozen=True, slots=True)
class Labeling:
    labels: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        labels = tuple(int(v) for v in self.labels)
        if self.k < 1:
            raise LabelingError(f"arity must be >= 1, got {self.k}")
        for e, v in enumerate(labels):
            if not 0 <= v <= self.k:
                raise LabelingError(f"label {v} at element {e} outside 0..{self.k}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def zeros(cls, n: int, k: int) -> Labeling:
        return cls((0,) * n, k)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], n: int) -> Labeling:
        """Build a labeling from ``(X_1, ..., X_k)``; blocks must be disjoint."""
        labels = [0] * n
        for i, block in enumerate(blocks, start=1):
            for e in block:
                if labels[e]:
                    raise LabelingError(f"element {e} appears in blocks {labels[e]} and {i}")
                labels[e] = i
        return cls(tuple(labels), len(blocks))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, e: int) -> int:
        return self.labels[e]

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def blocks(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(e for e, v in enumerate(self.labels) if v == i)
                     for i in range(1, self.k + 1))

    def is_partition(self) -> bool:
        return all(self.labels)

    def assign(self, e: int, i: int) -> Labeling:
        """Copy with ``e`` labelled ``i`` (``e`` must currently be unassigned)."""
        _check_element(self, e)
        if self.labels[e]:
            raise LabelingError(f"element {e} already carries label {self.labels[e]}")
        if not 1 <= i <= self.k:
            raise LabelingError(f"coordinate {i} outside 1..{self.k}")
        labels = list(self.labels)
        labels[e] = i
        return Labeling(tuple(labels), self.k)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.labels)) + ")"


def _check_element(x: Labeling, e: int) -> None:
    if not 0 <= e < len(x.labels):
        raise LabelingError(f"element {e} not in ground set of size {len(x.labels)}")


def _check_compatible(x: Labeling, y: Labeling) -> None:
    if x.k != y.k:
        raise LabelingError(f"arity mismatch: {x.k} vs {y.k}")
    if len(x.labels) != len(y.labels):
        raise LabelingError(f"ground set mismatch: {len(x.labels)} vs {len(y.labels)}")


def support(x: Labeling) -> frozenset[int]:
    return frozenset(e for e, v in enumerate(x.labels) if v)


def meet(x: Labeling, y: Labeling) -> Labeling:
    """Blockwise intersection: keep a label only where both agree."""
    _check_compatible(x, y)
    return Labeling(tuple(a if a == b else 0 for a, b in zip(x.labels, y.labels)), x.k)


def _join_label(a: int, b: int) -> int:
    if a == 0:
        return b
    if b == 0 or a == b:
        return a
    return 0


def join(x: Labeling, y: Labeling) -> Labeling:
    """Blockwise union with conflicting elements dropped to 0."""
    _check_compatible(x, y)
    return Labeling(tuple(_join_label(a, b) for a, b in zip(x.labels, y.labels)), x.k)


def dot_join(x: Labeling, y: Labeling) -> Labeling:
    """Asymmetric join for k = 2: label 1 wins over label 2."""
    _check_compatible(x, y)
    if x.k != 2:
        raise LabelingError(f"dot_join is defined for k = 2 only, got k = {x.k}")
    out = []
    for a, b in zip(x.labels, y.labels):
        if a == 1 or b == 1:
            out.append(1)
        elif a == 2 or b == 2:
            out.append(2)
        else:
            out.append(0)
    return Labeling(tuple(out), 2)


def leq(x: Labeling, y: Labeling) -> bool:
    """``x ⪯ y``: every block of ``x`` is contained in the same block of ``y``."""
    _check_compatible(x, y)
    return all(a == 0 or a == b for a, b in zip(x.labels, y.labels))


def overwrite(base: Labeling, over: Labeling) -> Labeling:
    """Replace the coordinates of ``base`` on ``support(over)`` by those of ``over``."""
    _check_compatible(base, over)
    return Labeling(tuple(b if b else a for a, b in zip(base.labels, over.labels)), base.k)


def clear(x: Labeling, e: int) -> Labeling:
    _check_element(x, e)
    labels = list(x.labels)
    labels[e] = 0
    return Labeling(tuple(labels), x.k)


def encode(x: Labeling) -> int:
    radix = x.k + 1
    index = 0
    for v in reversed(x.labels):
        index = index * radix + v
    return index


def decode(index: int, n: int, k: int) -> Labeling:
    radix = k + 1
    if not 0 <= index < radix ** n:
        raise LabelingError(f"index {index} outside [0, {radix ** n})")
    labels = []
    for _ in range(n):
        index, digit = divmod(index, radix)
        labels.append(digit)
    return Labeling(tuple(labels), k)


def all_labelings(n: int, k: int) -> Iterator[Labeling]:
    """Every labeling in encode-index order."""
    for digits in product(range(k + 1), repeat=n):
        yield Labeling(digits[::-1], k)


def all_partitions(n: int, k: int) -> Iterator[Labeling]:
    """Every full-support labeling, in encode-index order."""
    for digits in product(range(1, k + 1), repeat=n):
        yield Labeling(digits[::-1], k)
