"""Per-step coordinate distributions for the randomized greedy framework.

Each function maps the marginal-gain vector ``y`` (``y[i-1]`` is the gain of
putting the current element in block ``i``) to probabilities ``p`` over the
``k`` coordinates.  With ``exact=True`` inputs are converted to
:class:`~fractions.Fraction` and the result is exact; the audit uses this on
integer-valued oracles.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class DistributionError(ValueError):
    pass


class NotMonotoneError(DistributionError):
    """A marginal gain below ``-tau`` was fed to the monotone strategy."""


def _convert(values, exact: bool):
    return [Fraction(v) for v in values] if exact else [float(v) for v in values]


def dist_nonmonotone(y: Sequence[float], eps: float = 0.0, exact: bool = False) -> tuple:
    """Geometric distribution over the coordinates with positive gain.

    Coordinates are ranked by ``y`` descending (ties: lower coordinate first).
    With ``i+`` positive gains (``y > eps``): ``i+ <= 1`` puts all mass on the
    top coordinate; ``i+ = 2`` splits the top two proportionally to ``y``;
    otherwise rank ``r < i+`` gets ``2^-r`` and rank ``i+`` gets ``2^-(i+ - 1)``.
    """
    if len(y) == 0:
        raise DistributionError("empty marginal vector")
    y = _convert(y, exact)
    k = len(y)
    order = sorted(range(k), key=lambda i: -y[i])
    positive = sum(1 for v in y if v > eps)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    p = [zero] * k
    if positive <= 1:
        p[order[0]] = one
    elif positive == 2:
        a, b = order[0], order[1]
        total = y[a] + y[b]
        p[a] = y[a] / total
        p[b] = y[b] / total
    else:
        half = Fraction(1, 2) if exact else 0.5
        for rank in range(1, positive):
            p[order[rank - 1]] = half ** rank
        p[order[positive - 1]] = half ** (positive - 1)
    return tuple(p)


def dist_monotone(y: Sequence[float], exact: bool = False) -> tuple:
    """``p_i = y_i^(k-1) / sum_j y_j^(k-1)``; all mass on coordinate 1 if the sum is 0."""
    if len(y) == 0:
        raise DistributionError("empty marginal vector")
    y = _convert(y, exact)
    k = len(y)
    tau = 1e-9 * (1 + max(abs(v) for v in y))
    low = min(y)
    if low < -tau:
        raise NotMonotoneError(f"negative marginal gain {float(low)} on a supposedly monotone oracle")
    t = k - 1
    # clamp round-off negatives; Python gives 0 ** 0 == 1, which is the k = 1 case
    powers = [(v if v > 0 else 0 * v) ** t for v in y]
    beta = sum(powers)
    if beta == 0:
        zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
        return (one,) + (zero,) * (k - 1)
    return tuple(w / beta for w in powers)


def dist_skew(y1: float, y2: float, alpha, exact: bool = False) -> tuple:
    """Two-coordinate distribution tilted towards coordinate 1 by ``alpha``.

    Negative ``y2`` forces coordinate 1 and negative ``y1`` forces coordinate 2;
    otherwise ``p = (alpha y1, y2) / (alpha y1 + y2)``.  A zero denominator
    picks the larger gain, ties to coordinate 1.
    """
    alpha = Fraction(alpha) if exact else float(alpha)
    if not 0 <= alpha <= 1:
        raise DistributionError(f"alpha must lie in [0, 1], got {alpha}")
    y1, y2 = _convert((y1, y2), exact)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    if y2 < 0:
        return (one, zero)
    if y1 < 0:
        return (zero, one)
    denom = alpha * y1 + y2
    if denom == 0:
        return (one, zero) if y1 >= y2 else (zero, one)
    return (alpha * y1 / denom, y2 / denom)
