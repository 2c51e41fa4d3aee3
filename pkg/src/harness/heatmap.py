"""Channel-gain map data for one realization.

Emits the single-antenna channel power of every user over a grid of the
movement region, plus per-user channel gains and worst-case channel
correlation for the fixed array and for the swarm-optimized layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict

from src.baselines import Scheme, fpa_layout, fpa_seeds
from src.channel import (
    Apv,
    ScenarioConfig,
    channel_matrix,
    channel_power_gains,
    gain_map,
    generate_scenario,
    normalized_cross_correlation,
)
from src.harness.results import OutputFormat, write_table
from src.harness.runner import evaluation_map
from src.inner_loop import DEFAULT_SOLVER, SolverConfig
from src.numerics import RngStream, RVector
from src.pso import PsoParams, pso_optimize


GAIN_FLOOR = 1e-30


class GainSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    user: int
    x_m: float
    y_m: float
    gain_db: float


class LayoutUserStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    user: int
    channel_gain_db: float
    max_cross_correlation: float


class AntennaPosition(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    antenna: int
    x_m: float
    y_m: float


@dataclass(frozen=True, eq=False)
class HeatmapData:
    """Grid gains (K, P, P) in dB and layout statistics."""

    xs: RVector
    ys: RVector
    gains_db: npt.NDArray[np.float64]
    layouts: dict[Scheme, Apv]
    user_stats: tuple[LayoutUserStats, ...]


def _db(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    floored = np.maximum(np.asarray(values, dtype=np.float64), GAIN_FLOOR)
    return np.asarray(10.0 * np.log10(floored), dtype=np.float64)


def _layout_stats(
    scheme: Scheme, cfg: ScenarioConfig, h: npt.NDArray[np.complex128]
) -> list[LayoutUserStats]:
    gains = _db(channel_power_gains(h))
    corr = normalized_cross_correlation(h)
    np.fill_diagonal(corr, 0.0)
    worst = corr.max(axis=1)
    return [
        LayoutUserStats(
            scheme=scheme,
            user=k,
            channel_gain_db=float(gains[k]),
            max_cross_correlation=float(worst[k]),
        )
        for k in range(cfg.num_users)
    ]


def run_heatmap(
    cfg: ScenarioConfig,
    params: PsoParams,
    seed: int,
    solver: SolverConfig = DEFAULT_SOLVER,
    points: int = 61,
    workers: int | None = None,
) -> HeatmapData:
    """Gain map of trial 0 with fixed-array and optimized layouts.

    ``workers`` > 1 runs the swarm evaluations on a process pool.
    """
    root = RngStream(seed)
    scenario = generate_scenario(cfg, root.child("scenario", 0))
    xs, ys, gains = gain_map(scenario, cfg.wavelength_m, cfg.half_width_m, points)

    fpa = fpa_layout(cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m)
    rng = root.child("pso", Scheme.MA.value, 0)
    seeds = fpa_seeds(cfg) if params.seed_fixed_array else ()
    with evaluation_map(workers, experiment="heatmap", seed=seed) as map_fn:
        optimized = pso_optimize(
            scenario, cfg, params, rng, solver, map_fn=map_fn, seeds=seeds
        ).apv
    layouts = {Scheme.FPA: fpa, Scheme.MA: optimized}
    stats: list[LayoutUserStats] = []
    for scheme, apv in layouts.items():
        h = channel_matrix(apv, scenario, cfg.wavelength_m)
        stats.extend(_layout_stats(scheme, cfg, h))
    return HeatmapData(xs, ys, _db(gains), layouts, tuple(stats))


def emit_heatmap(
    data: HeatmapData, path: Path, fmt: OutputFormat = "csv"
) -> list[Path]:
    """Write the grid, the per-user layout statistics and the layouts.

    Sidecars are ``<stem>.users.csv`` and ``<stem>.layouts.csv``.
    """
    samples = [
        GainSample(
            user=k, x_m=float(x), y_m=float(y), gain_db=float(data.gains_db[k, iy, ix])
        )
        for k in range(data.gains_db.shape[0])
        for iy, y in enumerate(data.ys)
        for ix, x in enumerate(data.xs)
    ]
    positions = [
        AntennaPosition(scheme=scheme, antenna=m, x_m=float(x), y_m=float(y))
        for scheme, apv in data.layouts.items()
        for m, (x, y) in enumerate(apv.positions)
    ]
    users_path = path.with_name(f"{path.stem}.users.csv")
    layouts_path = path.with_name(f"{path.stem}.layouts.csv")
    return [
        write_table(path, tuple(GainSample.model_fields), samples, fmt),
        write_table(users_path, tuple(LayoutUserStats.model_fields), data.user_stats),
        write_table(layouts_path, tuple(AntennaPosition.model_fields), positions),
    ]
