"""
Prometheus Metrics

Instruments for the solver stack and the experiment harness.
Counters live in the default registry of the process that increments them;
the CLI can dump the main-process registry to a text file at exit.
"""

from __future__ import annotations

from pathlib import Path

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile


# ============================================================================
# Inner-Loop Metrics
# ============================================================================

bcd_solves_total = Counter(
    "bcd_solves_total",
    "Total BCD inner-loop solves",
    ["status"],  # converged, capped, unresolved
)

bcd_iterations = Histogram(
    "bcd_iterations",
    "Alternations performed per BCD solve",
    buckets=[1, 2, 3, 5, 10, 20, 50, 100, 200],
)

bisection_iterations = Histogram(
    "bisection_iterations",
    "Midpoints evaluated per bisection power search",
    buckets=[0, 5, 10, 15, 20, 25, 30, 40],
)

singular_solves_total = Counter(
    "singular_solves_total",
    "Linear solves rejected as singular",
    ["operation"],  # hermitian_solve, general_solve
)

# ============================================================================
# Outer-Loop Metrics
# ============================================================================

pso_fitness_evaluations_total = Counter(
    "pso_fitness_evaluations_total",
    "Fitness evaluations performed by PSO",
    ["scheme"],  # MA, MPZF
)

rate_exceeds_penalty_total = Counter(
    "rate_exceeds_penalty_total",
    "Observed rates above the penalty parameter tau",
)

# ============================================================================
# Harness Metrics
# ============================================================================

trials_completed_total = Counter(
    "trials_completed_total",
    "Scheme evaluations completed by the harness",
    ["scheme"],
)

trial_duration_seconds = Histogram(
    "trial_duration_seconds",
    "Wall-clock duration of one scheme on one trial",
    ["scheme"],
    buckets=[0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0],
)

results_written_total = Counter(
    "results_written_total",
    "Result files written",
    ["format"],  # csv, json
)


def dump_metrics(path: Path) -> None:
    """
    Write the default registry in Prometheus text format.

    Args:
        path: Destination file
    """
    write_to_textfile(str(path), REGISTRY)
