"""Alternating position selection over a discrete grid.

Starting from the fixed array, each antenna in turn moves to the grid point
that maximizes the inner-loop objective with all other antennas held fixed,
among points keeping the minimum spacing. Staying put is always a candidate
and wins ties. Cycles repeat until one makes no move or the cap is reached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from src.baselines.fpa import fpa_layout
from src.channel import Apv, Scenario, ScenarioConfig
from src.inner_loop import DEFAULT_SOLVER, InnerSolution, SolverConfig, bcd_solve
from src.numerics import RMatrix, RVector
from src.observability.logging import get_logger
from src.pso import MapFn
from src.pso.swarm import SPACING_RTOL


logger = get_logger(__name__)

DEFAULT_MAX_CYCLES = 10
# Candidates must beat the incumbent by this relative margin to move
TIE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ApsResult:
    """Final layout, its inner solution, cycles run and moves made."""

    apv: Apv
    solution: InnerSolution
    cycles: int
    moves: int


def aps_grid(wavelength_m: float, region_side_m: float) -> RMatrix:
    """All half-wavelength grid points of the region, boundary included."""
    step = wavelength_m / 2.0
    count = int(np.floor(region_side_m / step + 1e-9)) + 1
    coords = -region_side_m / 2.0 + step * np.arange(count)
    grid_x, grid_y = np.meshgrid(coords, coords)
    return np.column_stack([grid_x.ravel(), grid_y.ravel()])


def _admissible(point: RVector, others: RMatrix, min_distance_m: float) -> bool:
    if others.size == 0:
        return True
    distances = np.linalg.norm(others - point, axis=1)
    return bool(np.all(distances >= min_distance_m * (1.0 - SPACING_RTOL)))


def _improves(candidate: float, incumbent: float) -> bool:
    return candidate > incumbent + TIE_RTOL * abs(incumbent)


def aps_optimize(
    scenario: Scenario,
    cfg: ScenarioConfig,
    solver: SolverConfig = DEFAULT_SOLVER,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    map_fn: MapFn = map,
) -> ApsResult:
    """Per-antenna grid search from the fixed-array start.

    Args:
        scenario: Field-response information
        cfg: Scenario configuration
        solver: Inner-loop tolerances
        max_cycles: Cap on full passes over the antennas
        map_fn: Map used to evaluate the candidates of one move

    Returns:
        ApsResult with the final layout and its solution
    """
    if max_cycles < 1:
        raise ValueError(f"max_cycles must be positive, got {max_cycles}")
    evaluate = partial(bcd_solve, scenario=scenario, cfg=cfg, solver=solver)
    positions = fpa_layout(
        cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m
    ).positions.copy()
    current = evaluate(Apv(positions))
    grid = aps_grid(cfg.wavelength_m, cfg.region_side_m)

    cycles = moves = 0
    for cycle in range(1, max_cycles + 1):
        cycles = cycle
        changed = False
        for m in range(cfg.num_antennas):
            others = np.delete(positions, m, axis=0)
            layouts = []
            for point in grid:
                if np.allclose(point, positions[m], rtol=0.0, atol=1e-15):
                    continue
                if _admissible(point, others, cfg.min_distance_m):
                    candidate = positions.copy()
                    candidate[m] = point
                    layouts.append(candidate)
            solutions = list(map_fn(evaluate, [Apv(layout) for layout in layouts]))

            best_index = None
            best = current
            for index, solution in enumerate(solutions):
                if _improves(solution.min_rate, best.min_rate):
                    best_index, best = index, solution
            if best_index is not None:
                positions = layouts[best_index]
                current = best
                changed = True
                moves += 1
        if not changed:
            break

    logger.debug("aps.completed", cycles=cycles, moves=moves, rate=current.min_rate)
    return ApsResult(Apv(positions), current, cycles, moves)
