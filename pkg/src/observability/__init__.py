"""
Observability Module

Provides structured logging and metrics instrumentation for the toolkit.
"""

from src.observability.logging import (
    configure_logging,
    get_logger,
    unwrap_numpy_scalars,
)
from src.observability.metrics import (
    bcd_iterations,
    bcd_solves_total,
    bisection_iterations,
    dump_metrics,
    pso_fitness_evaluations_total,
    rate_exceeds_penalty_total,
    results_written_total,
    singular_solves_total,
    trial_duration_seconds,
    trials_completed_total,
)


__all__ = [
    "bcd_iterations",
    "bcd_solves_total",
    "bisection_iterations",
    "configure_logging",
    "dump_metrics",
    "get_logger",
    "pso_fitness_evaluations_total",
    "rate_exceeds_penalty_total",
    "results_written_total",
    "singular_solves_total",
    "trial_duration_seconds",
    "trials_completed_total",
    "unwrap_numpy_scalars",
]
