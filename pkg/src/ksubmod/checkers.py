"""Brute-force verification of the structural properties of small oracles.

Every checker tabulates the oracle over all ``(k+1)^n`` labelings and tests
its defining inequality exhaustively with numpy.  Reports are deterministic:
the witness is the first violation in encode-index order (pairs ordered by
``x`` then ``y``, then by element and coordinate).

Integer-valued oracles are checked exactly (``tau = 0``); others use
``tau = 1e-9 * (1 + max |f|)`` and a violation needs slack ``< -tau``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .labeling import Labeling, all_labelings, decode
from .oracles import TableOracle, ValueOracle

MAX_DOMAIN = 4096  # (k+1)^n, i.e. n * log2(k+1) <= 12


class DomainTooLarge(ValueError):
    pass


@dataclass
class CheckReport:
    property: str
    passed: bool
    witness: dict | None = None
    tolerance: float = 0.0

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class BruteForceResult:
    optimum: float
    maximizers: tuple[Labeling, ...]
    has_partition_maximizer: bool
    partitions_only: bool = False
    values: np.ndarray | None = field(default=None, repr=False)


def check_domain(n: int, k: int) -> None:
    if (k + 1) ** n > MAX_DOMAIN:
        raise DomainTooLarge(
            f"(k+1)^n = {k + 1}^{n} exceeds the enumeration limit {MAX_DOMAIN} (n*log2(k+1) <= 12)")


def is_enumerable(n: int, k: int) -> bool:
    return (k + 1) ** n <= MAX_DOMAIN


@lru_cache(maxsize=64)
def digits(n: int, k: int) -> np.ndarray:
    """``(N, n)`` array; row ``idx`` holds ``decode(idx, n, k)``."""
    idx = np.arange((k + 1) ** n, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for j in range(n):
        out[:, j] = (idx // (k + 1) ** j) % (k + 1)
    out.setflags(write=False)
    return out


def _powers(n: int, k: int) -> np.ndarray:
    return (k + 1) ** np.arange(n, dtype=np.int64)


def tabulate(oracle: ValueOracle) -> np.ndarray:
    """Values of ``oracle`` on every labeling, in encode-index order."""
    check_domain(oracle.n, oracle.k)
    if isinstance(oracle, TableOracle):
        return oracle.values.copy()
    return np.array([oracle.evaluate(x) for x in all_labelings(oracle.n, oracle.k)], dtype=float)


def tolerance(oracle: ValueOracle, values: np.ndarray) -> float:
    if oracle.integral:
        return 0.0
    return 1e-9 * (1.0 + (float(np.max(np.abs(values))) if values.size else 0.0))


def _chunks(N: int, n: int, budget: int = 1 << 21):
    rows = max(1, budget // max(1, N * max(n, 1)))
    for start in range(0, N, rows):
        yield start, min(N, start + rows)


def _join(A, B):
    return np.where(A == 0, B, np.where((B == 0) | (A == B), A, 0))


def _meet(A, B):
    return np.where(A == B, A, 0)


def _dot_join(A, B):
    return np.where((A == 1) | (B == 1), 1, np.where((A == 2) | (B == 2), 2, 0))


def _leq(A, B):
    return np.all((A == 0) | (A == B), axis=-1)


def _label(idx: int, n: int, k: int) -> Labeling:
    return decode(int(idx), n, k)


def _prepare(oracle: ValueOracle, values):
    check_domain(oracle.n, oracle.k)
    F = tabulate(oracle) if values is None else np.asarray(values, dtype=float)
    return F, tolerance(oracle, F), digits(oracle.n, oracle.k)


def check_ksubmodular(oracle: ValueOracle, values=None) -> CheckReport:
    """``f(x) + f(y) >= f(x ⊔ y) + f(x ⊓ y)`` for every pair."""
    n, k = oracle.n, oracle.k
    F, tau, D = _prepare(oracle, values)
    pw = _powers(n, k)
    N = F.size
    for s, t in _chunks(N, n):
        A, B = D[s:t, None, :], D[None, :, :]
        ji = _join(A, B) @ pw
        mi = _meet(A, B) @ pw
        slack = F[s:t, None] + F[None, :] - F[ji] - F[mi]
        bad = slack < -tau
        if bad.any():
            r, y = divmod(int(np.argmax(bad.ravel())), N)
            x = s + r
            return CheckReport("k-submodular", False, {
                "x": _label(x, n, k), "y": _label(y, n, k),
                "join": _label(ji[r, y], n, k), "meet": _label(mi[r, y], n, k),
                "lhs": float(F[x] + F[y]), "rhs": float(F[ji[r, y]] + F[mi[r, y]]),
            }, tau)
    return CheckReport("k-submodular", True, None, tau)


def marginal_table(F: np.ndarray, n: int, k: int) -> np.ndarray:
    """``M[x, e, i-1] = f(x with e -> i) - f(x)``; NaN where ``x(e) != 0``."""
    D = digits(n, k)
    M = np.full((F.size, n, k), np.nan)
    for e in range(n):
        free = np.flatnonzero(D[:, e] == 0)
        for i in range(1, k + 1):
            M[free, e, i - 1] = F[free + i * (k + 1) ** e] - F[free]
    return M


def check_orthant_submodular(oracle: ValueOracle, values=None) -> CheckReport:
    """``Δ_{e,i} f(x) >= Δ_{e,i} f(y)`` whenever ``x ⪯ y`` and ``e`` is free in ``y``."""
    n, k = oracle.n, oracle.k
    F, tau, D = _prepare(oracle, values)
    M = marginal_table(F, n, k)
    N = F.size
    for s, t in _chunks(N, n):
        L = _leq(D[s:t, None, :], D[None, :, :])
        bad = np.zeros(L.shape, dtype=bool)
        with np.errstate(invalid="ignore"):
            for e in range(n):
                mask = L & (D[:, e] == 0)[None, :]
                for i in range(k):
                    bad |= mask & (M[s:t, None, e, i] - M[None, :, e, i] < -tau)
        if bad.any():
            r, y = divmod(int(np.argmax(bad.ravel())), N)
            x = s + r
            for e in range(n):
                if D[y, e]:
                    continue
                for i in range(k):
                    if M[x, e, i] - M[y, e, i] < -tau:
                        return CheckReport("orthant-submodular", False, {
                            "x": _label(x, n, k), "y": _label(y, n, k), "element": e,
                            "coordinate": i + 1, "lhs": float(M[x, e, i]), "rhs": float(M[y, e, i]),
                        }, tau)
    return CheckReport("orthant-submodular", True, None, tau)


def check_pairwise_monotone(oracle: ValueOracle, values=None) -> CheckReport:
    """``Δ_{e,i} f(x) + Δ_{e,j} f(x) >= 0`` for ``i != j``; vacuous when k = 1."""
    n, k = oracle.n, oracle.k
    F, tau, D = _prepare(oracle, values)
    M = marginal_table(F, n, k)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    if not pairs or n == 0:
        return CheckReport("pairwise-monotone", True, None, tau)
    with np.errstate(invalid="ignore"):
        S = np.stack([M[:, :, i] + M[:, :, j] for i, j in pairs], axis=-1)
        bad = (D == 0)[:, :, None] & (S < -tau)
    if bad.any():
        x, e, p = np.unravel_index(int(np.argmax(bad.ravel())), bad.shape)
        i, j = pairs[p]
        return CheckReport("pairwise-monotone", False, {
            "x": _label(x, n, k), "element": int(e), "coordinates": (i + 1, j + 1),
            "lhs": float(S[x, e, p]), "rhs": 0.0,
        }, tau)
    return CheckReport("pairwise-monotone", True, None, tau)


def check_monotone(oracle: ValueOracle, values=None) -> CheckReport:
    """``f(x) <= f(y)`` for every ``x ⪯ y``."""
    n, k = oracle.n, oracle.k
    F, tau, D = _prepare(oracle, values)
    N = F.size
    for s, t in _chunks(N, n):
        L = _leq(D[s:t, None, :], D[None, :, :])
        bad = L & (F[s:t, None] - F[None, :] > tau)
        if bad.any():
            r, y = divmod(int(np.argmax(bad.ravel())), N)
            x = s + r
            return CheckReport("monotone", False, {
                "x": _label(x, n, k), "y": _label(y, n, k), "lhs": float(F[x]), "rhs": float(F[y]),
            }, tau)
    return CheckReport("monotone", True, None, tau)


def check_alpha_bisubmodular(oracle: ValueOracle, alpha, values=None) -> CheckReport:
    """``f(x) + f(y) >= f(x ⊓ y) + α f(x ⊔ y) + (1-α) f(x ⊔̇ y)`` for every pair (k = 2)."""
    if oracle.k != 2:
        raise ValueError(f"alpha-bisubmodularity needs k = 2, got k = {oracle.k}")
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    n, k = oracle.n, 2
    F, tau, D = _prepare(oracle, values)
    pw = _powers(n, k)
    N = F.size
    p, q = alpha.numerator, alpha.denominator
    peak = float(np.max(np.abs(F))) if F.size else 0.0
    exact = oracle.integral and 4 * (peak + 1) * q < 2 ** 52
    name = f"alpha-bisubmodular[{alpha}]"
    for s, t in _chunks(N, n):
        A, B = D[s:t, None, :], D[None, :, :]
        mi = _meet(A, B) @ pw
        ji = _join(A, B) @ pw
        di = _dot_join(A, B) @ pw
        if exact:
            # scaled by q so every term stays an integer
            slack = q * (F[s:t, None] + F[None, :]) - q * F[mi] - p * F[ji] - (q - p) * F[di]
            bad = slack < 0
        else:
            a = float(alpha)
            slack = F[s:t, None] + F[None, :] - F[mi] - a * F[ji] - (1 - a) * F[di]
            bad = slack < -tau
        if bad.any():
            r, y = divmod(int(np.argmax(bad.ravel())), N)
            x = s + r
            a = float(alpha)
            return CheckReport(name, False, {
                "x": _label(x, n, k), "y": _label(y, n, k), "alpha": alpha,
                "meet": _label(mi[r, y], n, k), "join": _label(ji[r, y], n, k),
                "dot_join": _label(di[r, y], n, k), "lhs": float(F[x] + F[y]),
                "rhs": float(F[mi[r, y]] + a * F[ji[r, y]] + (1 - a) * F[di[r, y]]),
            }, tau)
    return CheckReport(name, True, None, tau)


def check_characterization(oracle: ValueOracle, values=None) -> tuple[bool, bool]:
    """(definitional k-submodularity, orthant submodularity AND pairwise monotonicity)."""
    F = tabulate(oracle) if values is None else values
    definitional = check_ksubmodular(oracle, F).passed
    local = check_orthant_submodular(oracle, F).passed and check_pairwise_monotone(oracle, F).passed
    return definitional, local


def brute_force_max(oracle: ValueOracle, partitions_only: bool = False, values=None) -> BruteForceResult:
    """Exact maximum over all labelings, or over full-support labelings only."""
    n, k = oracle.n, oracle.k
    F, tau, D = _prepare(oracle, values)
    full = np.all(D != 0, axis=1)
    pool = full if partitions_only else np.ones(F.size, dtype=bool)
    optimum = float(np.max(F[pool]))
    winners = np.flatnonzero(pool & (F >= optimum - tau))
    return BruteForceResult(
        optimum=optimum,
        maximizers=tuple(_label(i, n, k) for i in winners),
        has_partition_maximizer=bool(np.any(full[winners])),
        partitions_only=partitions_only,
        values=F,
    )
