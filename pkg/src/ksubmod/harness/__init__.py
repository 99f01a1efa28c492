from .experiments import (ALGORITHMS, AuditViolation, ConfigError, ReplayReport, ReplayRun, RunConfig,
                          TrialStats, VerificationError, replay_hardness, run_trials, trial_rng)
from .instances import (GENERATOR_KINDS, KINDS, GenerationError, InstanceError, InstanceFile, generate,
                        load_instance, parse_instance, table_instance)
from .report import COLUMNS, emit_report, parse_report

__all__ = [
    "ALGORITHMS", "AuditViolation", "COLUMNS", "ConfigError", "GENERATOR_KINDS", "GenerationError",
    "InstanceError", "InstanceFile", "KINDS", "ReplayReport", "ReplayRun", "RunConfig", "TrialStats",
    "VerificationError", "emit_report", "generate", "load_instance", "parse_instance", "parse_report",
    "replay_hardness", "run_trials", "table_instance", "trial_rng",
]
