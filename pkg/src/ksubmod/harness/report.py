"""Machine-readable reports (CSV or JSON, UTF-8, LF newlines)."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from ..checkers import BruteForceResult, CheckReport
from .experiments import TrialStats

COLUMNS = ("instance", "algorithm", "k", "n", "trials", "seed", "mean", "std", "ci99",
           "opt", "ratio", "bound", "queries")
CHECK_COLUMNS = ("instance", "property", "passed", "witness", "tolerance")
OPT_COLUMNS = ("instance", "k", "n", "optimum", "partitions_only", "maximizers",
               "has_partition_maximizer")
NA = "n/a"


def _number(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


def stats_row(stats: TrialStats) -> dict:
    row = {name: _number(getattr(stats, name)) for name in COLUMNS}
    row["verified"] = stats.verified
    return row


def check_row(instance: str, report: CheckReport) -> dict:
    witness = None
    if report.witness is not None:
        witness = {key: list(v.labels) if hasattr(v, "labels") else v for key, v in report.witness.items()}
    return {"instance": instance, "property": report.property, "passed": report.passed,
            "witness": witness, "tolerance": report.tolerance}


def opt_row(instance: str, result: BruteForceResult, k: int, n: int) -> dict:
    return {"instance": instance, "k": k, "n": n, "optimum": result.optimum,
            "partitions_only": result.partitions_only,
            "maximizers": [list(x.labels) for x in result.maximizers],
            "has_partition_maximizer": result.has_partition_maximizer}


def _csv_cell(v) -> str:
    if v is None:
        return NA
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def emit_rows(rows: list[dict], columns: tuple[str, ...], fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(rows, separators=(",", ":")) + "\n").encode("utf-8")
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue().encode("utf-8")


def emit_report(stats: list[TrialStats], fmt: str = "csv") -> bytes:
    """Trial summaries as CSV (fixed column order) or as a JSON array.

    Missing values (OPT unknown, ratio undefined) are ``n/a`` in CSV and
    ``null`` in JSON.
    """
    return emit_rows([stats_row(s) for s in stats], COLUMNS, fmt)


def parse_report(data: bytes, fmt: str = "csv") -> list[dict]:
    """Inverse of :func:`emit_report` for the fixed columns."""
    text = data.decode("utf-8")
    if fmt == "json":
        return json.loads(text)
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for raw in reader:
        row = {}
        for name in COLUMNS:
            cell = raw[name]
            if cell == NA:
                row[name] = None
            elif name in ("instance", "algorithm"):
                row[name] = cell
            elif name in ("k", "n", "trials", "seed", "queries"):
                row[name] = int(cell)
            else:
                row[name] = float(cell)
        rows.append(row)
    return rows
