"""Guaranteed approximation ratios (and the monotone query-hardness ceiling)."""
from __future__ import annotations

import math
from fractions import Fraction

from .greedy import _as_alpha, _sqrt_fraction


def skew_greedy_ratio(alpha) -> Fraction | float:
    """``2 sqrt(a) / (1 + sqrt(a))^2``; exact when ``sqrt(a)`` is rational."""
    alpha = _as_alpha(alpha)
    root = _sqrt_fraction(alpha)
    if root is not None:
        return 2 * root / (1 + root) ** 2
    r = math.sqrt(alpha)
    return 2 * r / (1 + r) ** 2


def skew_simple_ratio(alpha) -> Fraction:
    return 1 / (3 + 2 * _as_alpha(alpha))


def ratio_bounds(k: int, alpha=1) -> dict:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    greedy = skew_greedy_ratio(alpha)
    simple = skew_simple_ratio(alpha)
    return {
        "nonmonotone": Fraction(1, 2),
        "monotone": Fraction(k, 2 * k - 1),
        "hardness": Fraction(k + 1, 2 * k),
        "skew_greedy": greedy,
        "skew_simple": simple,
        "skew_combined": max(greedy, simple),
    }


def bound_for(algorithm: str, k: int, alpha=1):
    """Ratio guaranteed for a named algorithm."""
    key = {
        "nonmonotone": "nonmonotone",
        "monotone": "monotone",
        "skew-greedy": "skew_greedy",
        "skew-simple": "skew_simple",
        "skew-combined": "skew_combined",
    }[algorithm]
    return ratio_bounds(k, alpha)[key]
