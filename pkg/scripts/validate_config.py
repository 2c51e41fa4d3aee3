"""Experiment Configuration Validation Script.

Loads a TOML experiment document over a profile and reports the resolved
parameters, the sweep and every sweep point's validity.
Run: poetry run python scripts/validate_config.py configs/desk.toml [--profile desk]
"""

import argparse
import sys
from pathlib import Path

from rich.console import Console
from rich.table import Table


sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.exceptions import ConfigurationError  # noqa: E402
from src.harness import PROFILES, ExperimentSpec, check_sweep_point  # noqa: E402
from src.harness import load_experiment_config  # noqa: E402


console = Console()


def check_points(spec: ExperimentSpec) -> list[tuple[str, bool, str]]:
    """Validate every sweep point the way the runner does before a run."""
    sweep = spec.effective_sweep
    checks = []
    for value in sweep.values:
        label = f"{sweep.param}={value:g}"
        try:
            cfg, err = check_sweep_point(spec, value)
        except ConfigurationError as e:
            checks.append((label, False, e.reason))
            continue
        detail = (
            f"M={cfg.num_antennas} K={cfg.num_users} L={cfg.num_paths} "
            f"A={cfg.region_side_m:.3g} m pmax={cfg.pmax_dbm:g} dBm "
            f"mu={err.mu:g} delta={err.delta:g}"
        )
        checks.append((label, True, detail))
    return checks


def print_parameters(spec: ExperimentSpec) -> None:
    """Print the resolved experiment parameters in a table."""
    table = Table(
        title=f"Experiment '{spec.name}'",
        show_header=True,
        header_style="bold magenta",
    )
    table.add_column("Section", style="cyan", width=12)
    table.add_column("Parameter", width=20)
    table.add_column("Value", style="dim")

    sections = {
        "scenario": spec.base.model_dump(by_alias=True),
        "solver": spec.solver.model_dump(),
        "pso": spec.pso.model_dump(by_alias=True),
        "fri": spec.fri.model_dump(),
    }
    for section, values in sections.items():
        for name, value in values.items():
            table.add_row(section, name, str(value))
    table.add_row("experiment", "schemes", ",".join(s.value for s in spec.schemes))
    table.add_row("experiment", "trials", str(spec.trials))
    table.add_row("experiment", "seed", str(spec.seed))
    console.print(table)


def print_results(checks: list[tuple[str, bool, str]]) -> None:
    """Print sweep point results in a table."""
    table = Table(title="Sweep Points", show_header=True, header_style="bold magenta")
    table.add_column("Point", style="cyan", width=24)
    table.add_column("Status", width=10)
    table.add_column("Details", style="dim")

    for label, is_valid, message in checks:
        status = "✅ Valid" if is_valid else "❌ Invalid"
        status_style = "green" if is_valid else "red"
        table.add_row(label, f"[{status_style}]{status}[/{status_style}]", message)

    console.print(table)


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    parser = argparse.ArgumentParser(description="Validate an experiment document")
    parser.add_argument("config", type=Path, nargs="?", help="TOML document")
    parser.add_argument("--profile", choices=sorted(PROFILES), default="desk")
    args = parser.parse_args(argv)

    console.print("[bold]Experiment Configuration Validation[/bold]")
    console.print()

    try:
        spec = load_experiment_config(args.config, args.profile)
    except ConfigurationError as e:
        console.print(f"[red]❌ {e}[/red]")
        return 1

    print_parameters(spec)
    checks = check_points(spec)
    print_results(checks)

    valid_count = sum(1 for _, valid, _ in checks if valid)
    console.print()
    console.print("[bold]Summary:[/bold]")
    console.print(f"  Sweep points: {len(checks)}")
    console.print(f"  Valid: {valid_count}")
    console.print(f"  Work units: {len(checks) * spec.trials * len(spec.schemes)}")

    if valid_count == len(checks):
        console.print()
        console.print("[green]✅ Configuration is valid[/green]")
        return 0
    console.print()
    console.print("[red]❌ Some sweep points are invalid[/red]")
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        console.print("\n[yellow]Validation cancelled[/yellow]")
        sys.exit(1)
