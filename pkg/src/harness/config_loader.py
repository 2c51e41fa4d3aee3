"""
Experiment Configuration Loading

Builds an ExperimentSpec from a shipped profile, an optional TOML document and
command-line overrides, in that order of precedence. Documents use the
sections ``[scenario]``, ``[solver]``, ``[pso]``, ``[fri]`` and
``[experiment]`` (with an optional ``[experiment.sweep]`` table); keys are the
canonical parameter names (``M``, ``K``, ``lambda_m``, ``N``, ``T``, ...).
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.exceptions import ConfigurationError
from src.harness.experiment import PROFILES, ExperimentSpec
from src.observability.logging import get_logger


logger = get_logger(__name__)

SECTIONS: tuple[str, ...] = ("scenario", "solver", "pso", "fri", "experiment")

ConfigDocument = dict[str, dict[str, Any]]


def _merge(base: ConfigDocument, layer: Mapping[str, Mapping[str, Any]]) -> None:
    for section, values in layer.items():
        if section not in SECTIONS:
            raise ConfigurationError(section, f"unknown section, expected {SECTIONS}")
        if not isinstance(values, Mapping):
            raise ConfigurationError(section, "section must be a table")
        target = base.setdefault(section, {})
        for key, value in values.items():
            if isinstance(value, Mapping) and isinstance(target.get(key), dict):
                target[key] = {**target[key], **value}
            else:
                target[key] = value


def read_config_file(path: Path) -> ConfigDocument:
    """Parse a TOML experiment document.

    Raises:
        ConfigurationError: If the file is missing or not valid TOML
    """
    try:
        with path.open("rb") as handle:
            document = tomllib.load(handle)
    except OSError as e:
        raise ConfigurationError(str(path), f"cannot read: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(str(path), f"invalid TOML: {e}") from e
    return document


def merge_layers(
    profile: str = "desk",
    path: Path | None = None,
    overrides: Mapping[str, Mapping[str, Any]] | None = None,
) -> ConfigDocument:
    """Merged configuration document (profile < file < overrides)."""
    if profile not in PROFILES:
        raise ConfigurationError(
            profile, f"unknown profile, expected one of {sorted(PROFILES)}"
        )
    merged: ConfigDocument = {}
    _merge(merged, PROFILES[profile])
    if path is not None:
        _merge(merged, read_config_file(path))
    if overrides:
        _merge(merged, overrides)
    return merged


def spec_from_document(
    document: ConfigDocument, name: str = "config"
) -> ExperimentSpec:
    """Validate a merged document into an ExperimentSpec.

    Raises:
        ConfigurationError: On any validation failure
    """
    experiment = dict(document.get("experiment", {}))
    payload = {
        **experiment,
        "base": document.get("scenario", {}),
        "solver": document.get("solver", {}),
        "pso": document.get("pso", {}),
        "fri": document.get("fri", {}),
    }
    try:
        return ExperimentSpec.model_validate(payload)
    except ValidationError as e:
        raise ConfigurationError(name, str(e)) from e


def load_experiment_config(
    path: Path | None = None,
    profile: str = "desk",
    overrides: Mapping[str, Mapping[str, Any]] | None = None,
) -> ExperimentSpec:
    """Load an experiment from a profile, a TOML file and overrides.

    Args:
        path: Optional TOML document layered over the profile
        profile: Shipped profile name (``table1`` or ``desk``)
        overrides: Section tables applied last (command-line flags)

    Returns:
        Validated experiment description

    Raises:
        ConfigurationError: If a layer cannot be read or the result is invalid
    """
    document = merge_layers(profile, path, overrides)
    spec = spec_from_document(document, str(path) if path else profile)
    logger.debug(
        "config.loaded",
        profile=profile,
        path=str(path) if path else None,
        M=spec.base.num_antennas,
        K=spec.base.num_users,
        trials=spec.trials,
    )
    return spec
