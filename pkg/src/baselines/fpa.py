"""Fixed-position uniform planar array."""

from __future__ import annotations

import math

import numpy as np

from src.channel import Apv, Scenario, ScenarioConfig
from src.exceptions import RegionTooSmallError
from src.inner_loop import DEFAULT_SOLVER, InnerSolution, SolverConfig, bcd_solve


def fpa_layout(num_antennas: int, wavelength_m: float, region_side_m: float) -> Apv:
    """Centered half-wavelength grid.

    Uses ``floor(sqrt(M))`` rows and ``ceil(M / rows)`` columns filled row by
    row from the top; a partial last row is left-aligned.

    Raises:
        RegionTooSmallError: If the grid extent exceeds the region side
    """
    if num_antennas < 1:
        raise ValueError(f"need at least one antenna, got {num_antennas}")
    rows = math.isqrt(num_antennas)
    cols = math.ceil(num_antennas / rows)
    spacing = wavelength_m / 2.0
    span = (max(rows, cols) - 1) * spacing
    if span > region_side_m * (1.0 + 1e-12):
        raise RegionTooSmallError(num_antennas, span, region_side_m)

    xs = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    ys = ((rows - 1) / 2.0 - np.arange(rows)) * spacing
    positions = np.array([(xs[m % cols], ys[m // cols]) for m in range(num_antennas)])
    return Apv(positions)


def fpa_evaluate(
    scenario: Scenario, cfg: ScenarioConfig, solver: SolverConfig = DEFAULT_SOLVER
) -> InnerSolution:
    """Inner-loop solution at the fixed array layout."""
    apv = fpa_layout(cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m)
    return bcd_solve(apv, scenario, cfg, solver)


def fpa_seeds(cfg: ScenarioConfig) -> tuple[Apv, ...]:
    """The fixed array as a swarm seed, or nothing if it does not fit."""
    try:
        return (fpa_layout(cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m),)
    except RegionTooSmallError:
        return ()
