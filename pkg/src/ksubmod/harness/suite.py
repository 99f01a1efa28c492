"""The desk-scale benchmark suite: small instances whose properties are checked, not assumed."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..checkers import (check_alpha_bisubmodular, check_ksubmodular, check_monotone, tabulate)
from ..hardness import random_partition
from ..oracles import SetSumOracle, TableOracle
from .instances import InstanceFile, _ksubmodular_proposal, generate

HARDNESS_TRIPLES = ((2, 2, Fraction(1, 2)), (2, 4, Fraction(1, 4)), (3, 4, Fraction(1, 4)))
SKEW_ALPHAS = (Fraction(1), Fraction(1, 4), Fraction(1, 16))


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    instance: InstanceFile
    ksubmodular: bool
    monotone: bool
    alpha: Fraction | None = None   # set when the table passes the alpha-bisubmodular check

    def oracle(self):
        return self.instance.oracle()


def _entry(name: str, inst: InstanceFile, alpha: Fraction | None = None) -> SuiteEntry:
    oracle = inst.oracle()
    values = tabulate(oracle)
    ksub = check_ksubmodular(oracle, values).passed
    mono = check_monotone(oracle, values).passed
    if alpha is not None and not check_alpha_bisubmodular(oracle, alpha, values).passed:
        alpha = None
    return SuiteEntry(name, inst, ksub, mono, alpha)


def cutsum_graphs(max_vertices: int = 4, ks=(2, 3)) -> list[SuiteEntry]:
    """Every labelled simple graph on at most ``max_vertices`` vertices, unit weights."""
    out = []
    for k in ks:
        for n in range(max_vertices + 1):
            pairs = list(combinations(range(n), 2))
            for mask in range(1 << len(pairs)):
                edges = [[u, v, 1] for bit, (u, v) in enumerate(pairs) if mask >> bit & 1]
                inst = InstanceFile("cutsum", k, n, {"edges": edges})
                out.append(_entry(f"cutsum-k{k}-n{n}-g{mask}", inst))
    return out


def welfare_instances(seeds=range(3)) -> list[SuiteEntry]:
    out = []
    for k in (1, 2, 3):
        for n in (1, 2, 3):
            for seed in seeds:
                inst = generate("random-welfare", {"k": k, "n": n, "universe": 4}, seed=1000 * k + 10 * n + seed)
                out.append(_entry(f"welfare-k{k}-n{n}-s{seed}", inst))
    return out


def hardness_instances(partitions: int = 5) -> list[SuiteEntry]:
    """``f`` and ``g_P`` for each triple, ``partitions`` seeded hidden partitions each."""
    out = []
    for k, n, eps in HARDNESS_TRIPLES:
        tag = f"k{k}-n{n}-e{eps.numerator}_{eps.denominator}"
        eps_pair = [eps.numerator, eps.denominator]
        out.append(_entry(f"hardness-f-{tag}", InstanceFile("hardness-f", k, n, {"eps": eps_pair})))
        for seed in range(partitions):
            P = list(random_partition(n, k, seed))
            inst = InstanceFile("hardness-g", k, n, {"eps": eps_pair, "partition": P})
            out.append(_entry(f"hardness-g-{tag}-s{seed}", inst))
    return out


def skew_tables(alphas=SKEW_ALPHAS, sizes=(1, 2, 3, 4), seeds=range(3)) -> list[SuiteEntry]:
    out = []
    for alpha in alphas:
        for n in sizes:
            for seed in seeds:
                inst = generate("random-skew-table", {"n": n, "alpha": alpha}, seed=100 * n + seed)
                out.append(_entry(f"skew-a{alpha.numerator}_{alpha.denominator}-n{n}-s{seed}", inst, alpha))
    return out


def ksubmodular_tables(seeds=range(3)) -> list[SuiteEntry]:
    out = []
    for k in (2, 3):
        for n in (1, 2, 3):
            for seed in seeds:
                inst = generate("random-verified-ksubmodular", {"k": k, "n": n}, seed=100 * k + 10 * n + seed)
                out.append(_entry(f"table-k{k}-n{n}-s{seed}", inst))
    return out


def verified_suite() -> list[SuiteEntry]:
    return cutsum_graphs() + welfare_instances() + hardness_instances() + skew_tables() + ksubmodular_tables()


def characterization_tables(count: int, seed: int = 0) -> list[TableOracle]:
    """Random tables (n <= 3, k <= 3) mixing three sources.

    Uniform tables almost always fail every check, so two thirds of the
    draws come from structured proposals that land on both sides of the
    k-submodularity boundary: perturbed sums of k-submodular pieces, and
    ``sum_i g(X_i)`` for a random (often non-symmetric) set function ``g``.
    """
    rng = np.random.default_rng(seed)
    tables = []
    for t in range(count):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        source = t % 3
        if source == 0:
            values = rng.integers(0, 6, size=(k + 1) ** n)
        elif source == 1:
            values = _ksubmodular_proposal(rng, k, n)
        else:
            g_values = rng.integers(0, 6, size=1 << n)
            oracle = SetSumOracle(k, n, lambda X, gv=g_values: int(gv[sum(1 << e for e in X)]), integral=True)
            values = tabulate(oracle)
        tables.append(TableOracle(k, n, values))
    return tables
