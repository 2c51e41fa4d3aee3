"""
Structured Logging

structlog setup shared by the solvers, the harness and the CLI. Entries go to
stderr as JSON (production or ``log_format=json``) or as plain console lines.
"""

from __future__ import annotations

import logging
import sys
from typing import Any

import numpy as np
import structlog
from structlog.typing import EventDict, Processor

from src import __version__
from src.config import settings


def add_app_context(
    _logger: logging.Logger, _method_name: str, event_dict: EventDict
) -> EventDict:
    """Stamp service, environment and version on every entry."""
    event_dict["service"] = "ma-maxmin"
    event_dict["environment"] = settings.environment
    event_dict["version"] = __version__
    return event_dict


def unwrap_numpy_scalars(
    _logger: logging.Logger, _method_name: str, event_dict: EventDict
) -> EventDict:
    """Replace numpy scalars (``np.int64``, ``np.bool_``) with Python values.

    Solver results carry numpy scalars; the JSON renderer rejects most of them.
    """
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
    return event_dict


def configure_logging(log_level: str | None = None) -> None:
    """
    Configure structlog and the stdlib root logger.

    Worker processes call this from their pool initializer so their entries
    carry the same processors as the parent.

    Args:
        log_level: Level name overriding ``settings.log_level``
    """
    level = getattr(logging, log_level or settings.log_level)
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level)

    shared_processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        add_app_context,
        unwrap_numpy_scalars,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    renderer: Processor
    if settings.environment == "production" or settings.log_format == "json":
        renderer = structlog.processors.JSONRenderer()
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[*shared_processors, renderer],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)  # type: ignore[no-any-return]


def bind_experiment_context(experiment: str, seed: int) -> None:
    """
    Start a fresh context for one CLI command.

    Previously bound values (from an earlier command in the same process) are
    dropped.

    Args:
        experiment: Subcommand name (run, sweep, fri, convergence, heatmap)
        seed: Root seed of the experiment
    """
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(experiment=experiment, seed=seed)


def bind_trial_context(sweep_value: float, trial: int) -> None:
    structlog.contextvars.bind_contextvars(sweep_value=sweep_value, trial=trial)


def log_trial_completed(
    logger: structlog.stdlib.BoundLogger,
    scheme: str,
    min_rate: float,
    violations: int,
    wall_ms: float,
) -> None:
    """Debug entry for one scheme finishing one trial."""
    logger.debug(
        "trial.completed",
        scheme=scheme,
        min_rate=min_rate,
        violations=violations,
        wall_ms=wall_ms,
    )


def log_error(
    logger: structlog.stdlib.BoundLogger,
    error_type: str,
    message: str,
    context: dict[str, Any] | None = None,
) -> None:
    """
    Log a failed command with its error class and context.

    Args:
        logger: Logger instance
        error_type: Exception class name, e.g. ``ConfigurationError``
        message: Rendered exception message
        context: Extra fields such as the subcommand
    """
    logger.error(
        "error.occurred",
        error={"type": error_type, "message": message},
        context=context or {},
    )
