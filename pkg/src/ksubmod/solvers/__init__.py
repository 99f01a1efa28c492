from .bounds import bound_for, ratio_bounds, skew_greedy_ratio, skew_simple_ratio
from .distributions import (DistributionError, NotMonotoneError, dist_monotone,
                            dist_nonmonotone, dist_skew)
from .greedy import (AuditRecord, GreedyStep, GreedyTrace, Monotone, NonMonotone,
                     PreconditionError, Skew, SolverError, audit_steps, run_greedy, sample)
from .skew import double_greedy, first_block_function, skew_combined, skew_simple

__all__ = [
    "AuditRecord", "DistributionError", "GreedyStep", "GreedyTrace", "Monotone",
    "NonMonotone", "NotMonotoneError", "PreconditionError", "Skew", "SolverError",
    "audit_steps", "bound_for", "dist_monotone", "dist_nonmonotone", "dist_skew",
    "double_greedy", "first_block_function", "ratio_bounds", "run_greedy", "sample",
    "skew_combined", "skew_greedy_ratio", "skew_simple", "skew_simple_ratio",
]
