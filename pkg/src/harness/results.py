"""Result records and their CSV/JSON serialization.

Floats are written with 9 significant digits so repeated runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.baselines import Scheme
from src.exceptions import ResultsWriteError
from src.observability.logging import get_logger
from src.observability.metrics import results_written_total


logger = get_logger(__name__)

OutputFormat = Literal["csv", "json"]

RECORD_FIELDS: tuple[str, ...] = (
    "scheme",
    "sweep_param",
    "sweep_value",
    "trial",
    "seed",
    "min_rate_bps_hz",
    "iterations",
    "violations",
    "wall_ms",
)


class TrialRecord(BaseModel):
    """Outcome of one scheme on one (sweep value, trial) scenario."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scheme: Scheme
    sweep_param: str
    sweep_value: float
    trial: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    min_rate_bps_hz: float = Field(..., ge=0)
    iterations: int = Field(..., ge=0)
    violations: int = Field(..., ge=0)
    wall_ms: float = Field(default=0.0, ge=0)
    scenario_digest: str = Field(default="", exclude=True)


class SummaryRow(BaseModel):
    """Aggregate of one scheme at one sweep value."""

    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    sweep_param: str
    sweep_value: float
    trials: int
    mean_min_rate_bps_hz: float
    std_min_rate_bps_hz: float
    mean_violations: float


class ConvergencePoint(BaseModel):
    """Global best of the swarm after one iteration."""

    model_config = ConfigDict(frozen=True)

    iteration: int
    fitness: float
    rate_bps_hz: float
    violations: int
    signal_power: float
    interference_power: float
    signal_power_db: float
    interference_power_db: float


def _format_csv(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _format_json(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and np.isfinite(value):
        return float(f"{value:.9g}")
    return value


def write_table(
    path: Path,
    header: Sequence[str],
    rows: Iterable[BaseModel],
    fmt: OutputFormat = "csv",
) -> Path:
    """Write pydantic rows as CSV (given column order) or as a JSON array.

    Raises:
        ValueError: On an unknown format
        ResultsWriteError: If the file cannot be written
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported output format: {fmt}")
    dumped = [row.model_dump(mode="python") for row in rows]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            if fmt == "csv":
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(header)
                for row in dumped:
                    writer.writerow([_format_csv(row[name]) for name in header])
            else:
                payload = [
                    {name: _format_json(row[name]) for name in header}
                    for row in dumped
                ]
                handle.write(json.dumps(payload, indent=2))
                handle.write("\n")
    except OSError as e:
        raise ResultsWriteError(path, str(e)) from e

    results_written_total.labels(format=fmt).inc()
    logger.info("results.written", path=str(path), format=fmt, rows=len(dumped))
    return path


def emit_results(
    records: Sequence[TrialRecord], path: Path, fmt: OutputFormat = "csv"
) -> Path:
    """Write trial records with the fixed record header."""
    return write_table(path, RECORD_FIELDS, records, fmt)


def read_results(path: Path) -> list[TrialRecord]:
    """Load records written by ``emit_results`` (format from the suffix).

    Raises:
        ResultsWriteError: If the file cannot be read
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsWriteError(path, str(e)) from e
    if path.suffix == ".json":
        rows = json.loads(text)
    else:
        rows = list(csv.DictReader(text.splitlines()))
    return [TrialRecord.model_validate(row) for row in rows]


def summarize(records: Sequence[TrialRecord]) -> list[SummaryRow]:
    """Mean and sample standard deviation per (scheme, sweep value).

    Groups keep the order of their first record.
    """
    groups: dict[tuple[Scheme, str, float], list[TrialRecord]] = {}
    for record in records:
        key = (record.scheme, record.sweep_param, record.sweep_value)
        groups.setdefault(key, []).append(record)

    rows = []
    for (scheme, param, value), group in groups.items():
        rates = np.array([r.min_rate_bps_hz for r in group])
        spread = float(np.std(rates, ddof=1)) if len(group) > 1 else 0.0
        rows.append(
            SummaryRow(
                scheme=scheme,
                sweep_param=param,
                sweep_value=value,
                trials=len(group),
                mean_min_rate_bps_hz=float(np.mean(rates)),
                std_min_rate_bps_hz=spread,
                mean_violations=float(np.mean([r.violations for r in group])),
            )
        )
    return rows


def summary_path(path: Path) -> Path:
    """Sidecar path ``<stem>.summary.csv`` next to ``path``."""
    return path.with_name(f"{path.stem}.summary.csv")


def write_summary(rows: Sequence[SummaryRow], path: Path) -> Path:
    return write_table(path, tuple(SummaryRow.model_fields), rows, "csv")


def emit_convergence(
    points: Sequence[ConvergencePoint], path: Path, fmt: OutputFormat = "csv"
) -> Path:
    return write_table(path, tuple(ConvergencePoint.model_fields), points, fmt)
