"""
Command-Line Entry Point

``ma-maxmin`` subcommands:

- ``run``: one experiment as configured
- ``sweep``: a preset parameter sweep (``--family M|K|A_over_lambda|pmax_dbm|L``)
- ``fri``: robustness to imperfect field-response information (``--error mu|delta``)
- ``convergence``: per-iteration global best of one swarm search
- ``heatmap``: channel-gain map and layout statistics of one realization

Exit codes: 0 on success, 1 on configuration errors, 2 on IO errors.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from src import __version__
from src.baselines import Scheme
from src.config import settings
from src.exceptions import ConfigurationError, ResultsWriteError
from src.harness import (
    FRI_AXES,
    ExperimentSpec,
    SummaryRow,
    emit_convergence,
    emit_heatmap,
    emit_results,
    load_experiment_config,
    run_convergence,
    run_experiment,
    run_fri_robustness,
    run_heatmap,
    summarize,
    summary_path,
    sweep_preset,
    write_summary,
)
from src.harness.experiment import PROFILES
from src.observability.logging import (
    bind_experiment_context,
    configure_logging,
    get_logger,
    log_error,
)
from src.observability.metrics import dump_metrics


logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

FAMILIES: tuple[str, ...] = ("M", "K", "A_over_lambda", "pmax_dbm", "L")


def _parse_schemes(value: str) -> list[str]:
    names = [name.strip().upper() for name in value.split(",") if name.strip()]
    valid = {scheme.value for scheme in Scheme}
    unknown = [name for name in names if name not in valid]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"schemes must be a comma list of {sorted(valid)}, got {value!r}"
        )
    return names


def _parse_values(value: str) -> list[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value list: {value!r}") from None


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer: {value}")
    return number


def _parse_seed(value: str) -> int:
    seed = int(value, 0)
    if not 0 <= seed < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits: {value}")
    return seed


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML experiment document")
    parser.add_argument(
        "--profile", choices=sorted(PROFILES), default="desk", help="Base profile"
    )
    parser.add_argument("--seed", type=_parse_seed, help="Root seed (64-bit)")
    parser.add_argument("--out", type=Path, help="Output file")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument(
        "--metrics-out", type=Path, help="Write Prometheus metrics text here"
    )
    parser.add_argument("--workers", type=_positive_int, help="Worker processes")


def _add_experiment(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    parser.add_argument("--trials", type=_positive_int, help="Trials per sweep value")
    parser.add_argument(
        "--schemes", type=_parse_schemes, help="Comma list of MA,FPA,APS,MPZF"
    )
    parser.add_argument(
        "--timing", action="store_true", help="Write measured wall_ms to results"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ma-maxmin",
        description="Movable-antenna max-min rate optimization experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
        help="Overrides MA_MAXMIN_LOG_LEVEL",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    _add_experiment(commands.add_parser("run", help="Run one experiment"))

    sweep = commands.add_parser("sweep", help="Run a preset parameter sweep")
    _add_experiment(sweep)
    sweep.add_argument("--family", choices=FAMILIES, required=True)
    sweep.add_argument(
        "--values", type=_parse_values, help="Comma list replacing the preset"
    )

    fri = commands.add_parser("fri", help="Imperfect field-response sweep")
    _add_experiment(fri)
    fri.add_argument("--error", choices=sorted(FRI_AXES), required=True)
    fri.add_argument(
        "--values", type=_parse_values, help="Comma list replacing the preset"
    )

    _add_common(commands.add_parser("convergence", help="Swarm convergence trace"))

    heatmap = commands.add_parser("heatmap", help="Channel-gain map data")
    _add_common(heatmap)
    heatmap.add_argument(
        "--points", type=_positive_int, default=61, help="Grid points per axis"
    )
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, dict[str, Any]]:
    experiment: dict[str, Any] = {}
    if args.seed is not None:
        experiment["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        experiment["trials"] = args.trials
    if getattr(args, "schemes", None):
        experiment["schemes"] = args.schemes
    if getattr(args, "timing", False):
        experiment["timing"] = True

    axis = getattr(args, "family", None) or getattr(args, "error", None)
    if axis is not None:
        values = args.values or sweep_preset(args.profile, axis).values
        experiment["sweep"] = {"param": axis, "values": list(values)}
        if args.command == "fri":
            # the non-swept error component stays at zero
            return {"experiment": experiment, "fri": {"mu": 0.0, "delta": 0.0}}
    return {"experiment": experiment} if experiment else {}


def _output_path(args: argparse.Namespace, spec: ExperimentSpec) -> Path:
    if args.out is not None:
        return Path(args.out)
    if spec.output is not None:
        return spec.output
    return Path(f"{args.command}.{args.format}")


def _print_summary(console: Console, rows: Sequence[SummaryRow]) -> None:
    table = Table(title="Max-min rate (bps/Hz)")
    table.add_column("Scheme", style="cyan")
    table.add_column("Sweep", style="magenta")
    table.add_column("Trials", justify="right")
    table.add_column("Mean", justify="right", style="green")
    table.add_column("Std", justify="right")
    table.add_column("Violations", justify="right")
    for row in rows:
        table.add_row(
            row.scheme.value,
            f"{row.sweep_param}={row.sweep_value:g}",
            str(row.trials),
            f"{row.mean_min_rate_bps_hz:.4f}",
            f"{row.std_min_rate_bps_hz:.4f}",
            f"{row.mean_violations:.2f}",
        )
    console.print(table)


def _run_records(
    args: argparse.Namespace, spec: ExperimentSpec, console: Console
) -> None:
    workers = args.workers or settings.workers
    if args.command == "fri":
        records = run_fri_robustness(spec, workers, args.log_level)
    else:
        records = run_experiment(spec, workers, args.log_level)
    out = _output_path(args, spec)
    emit_results(records, out, args.format)
    rows = summarize(records)
    write_summary(rows, summary_path(out))
    _print_summary(console, rows)
    console.print(f"[green]Wrote {len(records)} records to {out}[/green]")


def _run_convergence(
    args: argparse.Namespace, spec: ExperimentSpec, console: Console
) -> None:
    points = run_convergence(
        spec.base, spec.pso, spec.seed, spec.solver, args.workers
    )
    out = emit_convergence(points, _output_path(args, spec), args.format)
    last = points[-1]
    console.print(
        f"[green]Final rate {last.rate_bps_hz:.4f} bps/Hz, "
        f"{last.violations} violations, {len(points)} points in {out}[/green]"
    )


def _run_heatmap(
    args: argparse.Namespace, spec: ExperimentSpec, console: Console
) -> None:
    data = run_heatmap(
        spec.base, spec.pso, spec.seed, spec.solver, args.points, args.workers
    )
    paths = emit_heatmap(data, _output_path(args, spec), args.format)
    table = Table(title="Per-user channel gain (dB)")
    table.add_column("Scheme", style="cyan")
    table.add_column("User", justify="right")
    table.add_column("Gain", justify="right", style="green")
    table.add_column("Max correlation", justify="right")
    for stats in data.user_stats:
        table.add_row(
            stats.scheme.value,
            str(stats.user),
            f"{stats.channel_gain_db:.2f}",
            f"{stats.max_cross_correlation:.3f}",
        )
    console.print(table)
    console.print(f"[green]Wrote {', '.join(str(p) for p in paths)}[/green]")


def execute(args: argparse.Namespace, console: Console) -> None:
    """Run a parsed command.

    Raises:
        ConfigurationError: On invalid configuration
        ResultsWriteError: If an output file cannot be written
    """
    spec = load_experiment_config(args.config, args.profile, _overrides(args))
    bind_experiment_context(args.command, spec.seed)
    if args.command in ("run", "sweep", "fri"):
        _run_records(args, spec, console)
    elif args.command == "convergence":
        _run_convergence(args, spec, console)
    else:
        _run_heatmap(args, spec, console)

    metrics_out = args.metrics_out or settings.metrics_textfile
    if metrics_out is not None:
        dump_metrics(metrics_out)


def main(argv: Sequence[str] | None = None) -> int:
    """Console-script entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    console = Console()
    try:
        execute(args, console)
    except (ConfigurationError, ValidationError) as e:
        log_error(logger, type(e).__name__, str(e), {"command": args.command})
        console.print(f"[red]Configuration error:[/red] {e}")
        return EXIT_CONFIG
    except (ResultsWriteError, OSError) as e:
        log_error(logger, type(e).__name__, str(e), {"command": args.command})
        console.print(f"[red]IO error:[/red] {e}")
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
