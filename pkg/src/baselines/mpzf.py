"""Maximum-power zero-forcing with swarm-optimized positions."""

from __future__ import annotations

from collections.abc import Sequence
from functools import partial

import numpy as np

from src.channel import Apv, Scenario, ScenarioConfig, channel_matrix
from src.exceptions import RankDeficientError
from src.inner_loop import InnerSolution
from src.numerics import CMatrix, RngStream
from src.pso import MapFn, PsoParams, PsoResult, pso_optimize
from src.receiver import SinrReport, sinr_report, zf_combiner


def zf_max_power_solution(h: CMatrix, pmax: float, sigma2: float) -> InnerSolution:
    """Every user at ``pmax`` with a zero-forcing combiner.

    A rank-deficient channel yields zero rates and no combiner.
    """
    num_users = h.shape[1]
    p = np.full(num_users, pmax, dtype=np.float64)
    try:
        combiner = zf_combiner(h)
    except RankDeficientError:
        zeros = np.zeros(num_users)
        report = SinrReport(zeros, zeros.copy(), 0.0)
        return InnerSolution(None, p, report, h, 1, (0.0,))
    report = sinr_report(combiner, h, p, sigma2)
    return InnerSolution(combiner, p, report, h, 1, (report.min_rate,))


def mpzf_evaluate(apv: Apv, scenario: Scenario, cfg: ScenarioConfig) -> InnerSolution:
    h = channel_matrix(apv, scenario, cfg.wavelength_m)
    return zf_max_power_solution(h, cfg.pmax_w, cfg.sigma2_w)


def mpzf_optimize(
    scenario: Scenario,
    cfg: ScenarioConfig,
    params: PsoParams,
    rng: RngStream,
    map_fn: MapFn = map,
    seeds: Sequence[Apv] = (),
) -> PsoResult:
    """Swarm search with the zero-forcing full-power evaluator.

    Shares the penalty and swarm machinery of the MA scheme.
    """
    if cfg.num_users > cfg.num_antennas:
        raise ValueError("zero forcing needs K <= M")
    evaluate = partial(mpzf_evaluate, scenario=scenario, cfg=cfg)
    return pso_optimize(
        scenario,
        cfg,
        params,
        rng,
        evaluate=evaluate,
        map_fn=map_fn,
        scheme="MPZF",
        seeds=seeds,
    )
