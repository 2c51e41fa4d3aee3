"""Block coordinate descent over receive combining and transmit power.

For a fixed antenna layout the combiner and the power vector are optimized
alternately: bisection power control under the previous combiner, then the
MMSE combiner under the new powers. The objective is the minimum user rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from src.channel import Apv, Scenario, ScenarioConfig, channel_matrix
from src.numerics import CMatrix, RVector
from src.observability.logging import get_logger
from src.observability.metrics import bcd_iterations, bcd_solves_total
from src.power import bisection_power, saturate_power
from src.receiver import Combiner, SinrReport, mmse_combiner, sinr_report


logger = get_logger(__name__)


class SolverConfig(BaseModel):
    """Inner-loop tolerances.

    Attributes:
        epsilon: Bisection bracket tolerance (linear SINR)
        xi: BCD stopping threshold on the objective change
        max_iterations: Alternation cap
        xi_mode: ``absolute`` compares |G_j - G_{j-1}|, ``relative`` divides by G_{j-1}
        saturate_power: Rescale bisection powers so the largest equals pmax
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilon: float = Field(default=1e-3, gt=0)
    xi: float = Field(default=1e-3, gt=0)
    max_iterations: int = Field(default=200, ge=1)
    xi_mode: Literal["absolute", "relative"] = "absolute"
    saturate_power: bool = True


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True, eq=False)
class InnerSolution:
    """Combiner, powers and rates for one antenna layout.

    ``combiner`` is ``None`` only when no combiner exists (a rank-deficient
    zero-forcing evaluation); the report then holds zero rates.
    """

    combiner: Combiner | None
    p: RVector
    report: SinrReport
    h: CMatrix
    iterations: int
    trace: tuple[float, ...]
    capped: bool = False

    @property
    def min_rate(self) -> float:
        return self.report.min_rate


def _converged(current: float, previous: float, solver: SolverConfig) -> bool:
    change = abs(current - previous)
    if solver.xi_mode == "relative":
        return change == 0.0 or change < solver.xi * abs(previous)
    return change < solver.xi


def bcd_solve_channel(
    h: CMatrix,
    pmax: float,
    sigma2: float,
    solver: SolverConfig = DEFAULT_SOLVER,
    p0: npt.ArrayLike | None = None,
) -> InnerSolution:
    """Run the alternation on a given channel matrix.

    Args:
        h: Channel matrix (M, K)
        pmax: Per-user power budget in watts
        sigma2: Noise power in watts
        solver: Tolerances and cap
        p0: Initial powers (defaults to ``pmax`` for every user)

    Returns:
        InnerSolution; ``trace`` starts with the objective at the initial point
    """
    num_users = h.shape[1]
    if p0 is None:
        p = np.full(num_users, pmax, dtype=np.float64)
    else:
        p = np.asarray(p0, dtype=np.float64)
    combiner = mmse_combiner(h, p, sigma2)
    report = sinr_report(combiner, h, p, sigma2)
    trace = [report.min_rate]
    best = (report.min_rate, combiner, p, report)

    for iteration in range(1, solver.max_iterations + 1):
        bisection = bisection_power(h, combiner, pmax, sigma2, solver.epsilon)
        if bisection.eta == 0.0:
            # no target within the bracket resolution; the pass ends on the best iterate
            bcd_solves_total.labels(status="unresolved").inc()
            bcd_iterations.observe(iteration)
            _, combiner, p, report = best
            trace.append(best[0])
            return InnerSolution(combiner, p, report, h, iteration, tuple(trace))
        p = saturate_power(bisection.p, pmax) if solver.saturate_power else bisection.p
        combiner = mmse_combiner(h, p, sigma2)
        report = sinr_report(combiner, h, p, sigma2)
        trace.append(report.min_rate)
        if report.min_rate > best[0]:
            best = (report.min_rate, combiner, p, report)

        if _converged(trace[-1], trace[-2], solver):
            bcd_solves_total.labels(status="converged").inc()
            bcd_iterations.observe(iteration)
            return InnerSolution(combiner, p, report, h, iteration, tuple(trace))

    bcd_solves_total.labels(status="capped").inc()
    bcd_iterations.observe(solver.max_iterations)
    logger.warning(
        "bcd.iteration_cap_reached",
        max_iterations=solver.max_iterations,
        last_change=abs(trace[-1] - trace[-2]),
        best_rate=best[0],
    )
    _, combiner, p, report = best
    return InnerSolution(
        combiner, p, report, h, solver.max_iterations, tuple(trace), capped=True
    )


def bcd_solve(
    apv: Apv,
    scenario: Scenario,
    cfg: ScenarioConfig,
    solver: SolverConfig = DEFAULT_SOLVER,
    p0: npt.ArrayLike | None = None,
) -> InnerSolution:
    """Max-min rate of a fixed antenna layout.

    Args:
        apv: Antenna positions (M of them)
        scenario: Field-response information used to build the channel
        cfg: Scenario configuration (wavelength, power budget, noise)
        solver: Tolerances and cap
        p0: Optional initial powers, for restarting from a previous solution

    Returns:
        InnerSolution whose ``min_rate`` is the layout's objective value
    """
    if apv.num_antennas != cfg.num_antennas:
        raise ValueError(
            f"layout has {apv.num_antennas} antennas, configuration expects "
            f"{cfg.num_antennas}"
        )
    h = channel_matrix(apv, scenario, cfg.wavelength_m)
    return bcd_solve_channel(h, cfg.pmax_w, cfg.sigma2_w, solver, p0)
