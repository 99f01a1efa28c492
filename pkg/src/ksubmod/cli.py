"""Command-line entry point: ``ksubmod {solve,opt,check,gen,replay}``.

Exit codes: 0 success, 2 validation error, 3 audit violation, 4 checker failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .checkers import (DomainTooLarge, brute_force_max, check_alpha_bisubmodular, check_ksubmodular,
                       check_monotone, check_orthant_submodular, check_pairwise_monotone, tabulate)
from .harness import (ALGORITHMS, GENERATOR_KINDS, AuditViolation, ConfigError, GenerationError,
                      InstanceError, RunConfig, VerificationError, emit_report, generate, load_instance,
                      replay_hardness, run_trials)
from .harness.report import CHECK_COLUMNS, OPT_COLUMNS, check_row, emit_rows, opt_row
from .hardness import HardnessError
from .labeling import LabelingError
from .oracles import OracleError
from .solvers import PreconditionError, SolverError

EXIT_OK, EXIT_INVALID, EXIT_AUDIT, EXIT_CHECK = 0, 2, 3, 4
PROPERTIES = ("k-submodular", "orthant-submodular", "pairwise-monotone", "monotone", "alpha-bisubmodular")


class UsageError(ValueError):
    pass


def fraction(text: str) -> Fraction:
    """``P/Q`` (or an integer) as an exact rational."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational P/Q, got {text!r}") from exc


def nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksubmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--instance", required=True, help="instance JSON file, or - for stdin")
        p.add_argument("--format", choices=("json", "csv"), default="csv")

    solve = sub.add_parser("solve", help="run an algorithm for several seeded trials")
    instance_args(solve)
    solve.add_argument("--algo", required=True, choices=ALGORITHMS)
    solve.add_argument("--trials", type=int, default=1)
    solve.add_argument("--seed", type=nonnegative, default=0)
    solve.add_argument("--order", choices=("input", "shuffled"), default="input")
    solve.add_argument("--alpha", type=fraction, help="skew parameter P/Q (default: the instance's)")
    solve.add_argument("--audit", action="store_true", help="check the per-step inequality on every trial")
    solve.add_argument("--audit-c", type=fraction, help="override the audit constant")
    solve.add_argument("--workers", type=int, default=1)
    solve.add_argument("--allow-unverified", action="store_true",
                       help="run on instances that are too large (or fail) the desk-scale checks")

    opt = sub.add_parser("opt", help="exact optimum by enumeration")
    instance_args(opt)
    opt.add_argument("--partitions-only", action="store_true")

    check = sub.add_parser("check", help="run the property checkers")
    instance_args(check)
    check.add_argument("--property", action="append", choices=PROPERTIES,
                       help="property to check (repeatable; default: all that apply)")
    check.add_argument("--alpha", type=fraction)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("kind", choices=GENERATOR_KINDS)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--n", type=nonnegative, required=True)
    gen.add_argument("--eps", type=fraction)
    gen.add_argument("--alpha", type=fraction)
    gen.add_argument("--seed", type=nonnegative, default=0)
    gen.add_argument("--edge-prob", type=float, default=0.5)
    gen.add_argument("--max-weight", type=int, default=1)
    gen.add_argument("--universe", type=int, default=4)
    gen.add_argument("--retry-budget", type=int, default=1000)
    gen.add_argument("--out", help="write here instead of stdout")

    replay = sub.add_parser("replay", help="count distinguishing queries against a hidden partition")
    instance_args(replay)
    replay.add_argument("--algo", choices=("nonmonotone", "monotone"), default="nonmonotone")
    replay.add_argument("--trials", type=int, default=1)
    replay.add_argument("--seed", type=nonnegative, default=0)
    replay.add_argument("--order", choices=("input", "shuffled"), default="input")
    return parser


def _instance_name(path: str) -> str:
    return "stdin" if path == "-" else Path(path).stem


def cmd_solve(args, out) -> int:
    inst = load_instance(args.instance)
    alpha = args.alpha if args.alpha is not None else inst.alpha
    config = RunConfig(args.algo, trials=args.trials, seed=args.seed, order=args.order, audit=args.audit,
                       audit_c=args.audit_c, alpha=alpha, workers=args.workers,
                       allow_unverified=args.allow_unverified)
    stats = run_trials(inst.oracle(), config, _instance_name(args.instance))
    out.write(emit_report([stats], args.format))
    return EXIT_OK


def cmd_opt(args, out) -> int:
    inst = load_instance(args.instance)
    result = brute_force_max(inst.oracle(), partitions_only=args.partitions_only)
    out.write(emit_rows([opt_row(_instance_name(args.instance), result, inst.k, inst.n)],
                        OPT_COLUMNS, args.format))
    return EXIT_OK


def cmd_check(args, out) -> int:
    inst = load_instance(args.instance)
    oracle = inst.oracle()
    alpha = args.alpha if args.alpha is not None else inst.alpha
    props = args.property
    if not props:
        props = list(PROPERTIES[:4]) + (["alpha-bisubmodular"] if inst.k == 2 and alpha is not None else [])
    if "alpha-bisubmodular" in props and alpha is None:
        raise UsageError("alpha-bisubmodular needs --alpha (or an instance carrying alpha)")
    values = tabulate(oracle)
    checkers = {
        "k-submodular": lambda: check_ksubmodular(oracle, values),
        "orthant-submodular": lambda: check_orthant_submodular(oracle, values),
        "pairwise-monotone": lambda: check_pairwise_monotone(oracle, values),
        "monotone": lambda: check_monotone(oracle, values),
        "alpha-bisubmodular": lambda: check_alpha_bisubmodular(oracle, alpha, values),
    }
    reports = [checkers[p]() for p in props]
    name = _instance_name(args.instance)
    out.write(emit_rows([check_row(name, r) for r in reports], CHECK_COLUMNS, args.format))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def cmd_gen(args, out) -> int:
    params = {"k": args.k, "n": args.n, "edge_prob": args.edge_prob, "max_weight": args.max_weight,
              "universe": args.universe}
    if args.eps is not None:
        params["eps"] = args.eps
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.kind.startswith("hardness") and args.eps is None:
        raise UsageError(f"{args.kind} needs --eps")
    if args.kind == "random-skew-table" and args.alpha is None:
        raise UsageError("random-skew-table needs --alpha")
    text = generate(args.kind, params, args.seed, args.retry_budget).to_json().encode("utf-8")
    if args.out:
        Path(args.out).write_bytes(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_replay(args, out) -> int:
    inst = load_instance(args.instance)
    if inst.kind != "hardness-g":
        raise UsageError(f"replay needs a hardness-g instance, got {inst.kind}")
    config = RunConfig(args.algo, trials=args.trials, seed=args.seed, order=args.order)
    report = replay_hardness(inst.hardness_params(), config)
    rows = [{"instance": _instance_name(args.instance), "algorithm": args.algo, "seed": args.seed,
             "trial": r.trial, "queries": r.queries, "unbalanced_count": r.unbalanced_count,
             "distinguished": r.distinguished} for r in report.runs]
    columns = ("instance", "algorithm", "seed", "trial", "queries", "unbalanced_count", "distinguished")
    out.write(emit_rows(rows, columns, args.format))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "opt": cmd_opt, "check": cmd_check, "gen": cmd_gen, "replay": cmd_replay}


def main(argv=None, out=None) -> int:
    out = sys.stdout.buffer if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except AuditViolation as exc:
        print(f"ksubmod: audit violation: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except (VerificationError, PreconditionError, GenerationError) as exc:
        print(f"ksubmod: checker failure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (InstanceError, ConfigError, UsageError, DomainTooLarge, HardnessError, OracleError,
            LabelingError, SolverError, OSError, json.JSONDecodeError) as exc:
        print(f"ksubmod: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
