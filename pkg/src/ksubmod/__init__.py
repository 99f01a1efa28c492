"""Randomized greedy maximization of k-submodular and skew-bisubmodular functions."""
from .labeling import (Labeling, LabelingError, all_labelings, all_partitions, clear, decode,
                       dot_join, encode, join, leq, meet, overwrite, support)
from .oracles import (CountingOracle, CutSumOracle, FunctionOracle, OracleError, SetSumOracle,
                      TableOracle, ValueOracle, WelfareOracle, marginal, wrap_counting)
from .hardness import (HardnessOracle, HardnessParams, d_vector, eval_f, eval_g, is_unbalanced,
                       n_zero, random_partition)
from .checkers import (BruteForceResult, CheckReport, DomainTooLarge, brute_force_max,
                       check_alpha_bisubmodular, check_ksubmodular, check_monotone,
                       check_orthant_submodular, check_pairwise_monotone, tabulate)

__version__ = "0.1.0"
