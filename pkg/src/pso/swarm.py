"""Particle swarm search over antenna layouts.

Each particle is a flat position vector ``[x1, y1, ..., xM, yM]`` inside the
square ``[-A/2, A/2]^2M``. Fitness is the layout's max-min rate minus
``tau`` times the number of antenna pairs closer than the minimum spacing.

Two update orders are supported:

* asynchronous (default): particles move and are evaluated one at a time;
  a new global best is visible to later particles of the same iteration.
* synchronous: all particles move against the previous global best, are
  evaluated together (optionally through ``map_fn``) and the bests are then
  updated in particle order.

Random draws come from per-(particle, iteration) sub-streams, so results
do not depend on evaluation order or worker count.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import partial
from typing import Any, TypeAlias

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.spatial.distance import pdist

from src.channel import Apv, Scenario, ScenarioConfig
from src.inner_loop import DEFAULT_SOLVER, InnerSolution, SolverConfig, bcd_solve
from src.numerics import RMatrix, RngStream, RVector, rng_draw_uniform
from src.observability.logging import get_logger
from src.observability.metrics import (
    pso_fitness_evaluations_total,
    rate_exceeds_penalty_total,
)


logger = get_logger(__name__)

# Distances within this relative margin of D count as satisfying the spacing
SPACING_RTOL = 1e-9

Evaluator: TypeAlias = Callable[[Apv], InnerSolution]
MapFn: TypeAlias = Callable[[Callable[[Any], Any], Iterable[Any]], Iterator[Any]]


class PsoParams(BaseModel):
    """Swarm hyper-parameters.

    Aliases are the canonical configuration keys. ``velocity_init_scale``
    scales the initial velocity range relative to ``[-A/2, A/2]``.
    With ``seed_fixed_array`` the harness starts particle 0 at the
    half-wavelength array.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    num_particles: int = Field(default=200, alias="N", ge=1)
    max_iterations: int = Field(default=300, alias="T", ge=0)
    c1: float = Field(default=1.4, ge=0)
    c2: float = Field(default=1.4, ge=0)
    omega_min: float = Field(default=0.4, ge=0)
    omega_max: float = Field(default=0.9, ge=0)
    tau: float = Field(default=10.0, ge=0)
    synchronous: bool = False
    per_coordinate: bool = False
    velocity_init_scale: float = Field(default=1.0, ge=0)
    seed_fixed_array: bool = True

    @model_validator(mode="after")
    def _check_inertia(self) -> PsoParams:
        if self.omega_min > self.omega_max:
            raise ValueError(
                f"omega_min {self.omega_min} exceeds omega_max {self.omega_max}"
            )
        return self


@dataclass(frozen=True, eq=False)
class FitnessValue:
    """Penalized fitness of one layout.

    Attributes:
        value: ``rate - tau * violations``
        rate: Max-min rate of the layout (bps/Hz)
        violations: Antenna pairs closer than the minimum spacing
        solution: Inner solution behind ``rate``
    """

    value: float
    rate: float
    violations: int
    solution: InnerSolution | None = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class SwarmState:
    """Swarm after ``iteration`` completed iterations.

    Arrays are (N, 2M); ``pbest_fitness[n]`` belongs to ``pbest_positions[n]``.
    """

    positions: RMatrix
    velocities: RMatrix
    pbest_positions: RMatrix
    pbest_fitness: tuple[FitnessValue, ...]
    gbest_position: RVector
    gbest_fitness: FitnessValue
    iteration: int = 0

    @property
    def num_particles(self) -> int:
        return int(self.positions.shape[0])


@dataclass(frozen=True, eq=False)
class PsoResult:
    """Best layout found, its recomputed inner solution and the gbest history.

    ``history[t]`` is the global best fitness after t iterations (t = 0 is the
    initial swarm).
    """

    apv: Apv
    solution: InnerSolution
    fitness: FitnessValue
    history: tuple[FitnessValue, ...]
    state: SwarmState = field(repr=False)


def inertia_weight(
    t: int, T: int, omega_min: float, omega_max: float  # noqa: N803
) -> float:
    """Linearly decreasing inertia ``omega_max - (omega_max - omega_min) t / T``."""
    if not 0 <= t <= max(T, 0):
        raise ValueError(f"iteration {t} outside [0, {T}]")
    if T == 0:
        return omega_max
    return omega_max - (omega_max - omega_min) * t / T


def project(r: npt.ArrayLike, region_side_m: float) -> Apv:
    """Clamp every coordinate to ``[-A/2, A/2]``."""
    half = region_side_m / 2.0
    return Apv.from_vector(np.clip(np.asarray(r, dtype=np.float64), -half, half))


def violation_set_size(apv: Apv, min_distance_m: float) -> int:
    """Number of unordered antenna pairs closer than ``min_distance_m``."""
    if apv.num_antennas < 2:
        return 0
    distances = pdist(apv.positions)
    return int(np.count_nonzero(distances < min_distance_m * (1.0 - SPACING_RTOL)))


def penalize(
    apv: Apv, solution: InnerSolution, cfg: ScenarioConfig, tau: float
) -> FitnessValue:
    """Combine an inner solution with the spacing penalty."""
    violations = violation_set_size(apv, cfg.min_distance_m)
    rate = solution.min_rate
    if rate > tau:
        rate_exceeds_penalty_total.inc()
        logger.warning("pso.rate_exceeds_penalty", rate=rate, tau=tau)
    return FitnessValue(rate - tau * violations, rate, violations, solution)


def fitness(
    apv: Apv,
    scenario: Scenario,
    cfg: ScenarioConfig,
    tau: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> FitnessValue:
    """Penalized max-min rate of a layout."""
    return penalize(apv, bcd_solve(apv, scenario, cfg, solver), cfg, tau)


def _evaluate(
    vector: RVector, evaluate: Evaluator, cfg: ScenarioConfig, tau: float
) -> FitnessValue:
    apv = Apv.from_vector(vector)
    return penalize(apv, evaluate(apv), cfg, tau)


def _evaluate_all(
    vectors: RMatrix,
    evaluate: Evaluator,
    cfg: ScenarioConfig,
    tau: float,
    map_fn: MapFn,
) -> list[FitnessValue]:
    task = partial(_evaluate, evaluate=evaluate, cfg=cfg, tau=tau)
    return list(map_fn(task, list(vectors)))


def init_swarm(
    params: PsoParams,
    cfg: ScenarioConfig,
    rng: RngStream,
    evaluate: Evaluator,
    map_fn: MapFn = map,
    scheme: str = "MA",
    seeds: Sequence[Apv] = (),
) -> SwarmState:
    """Random initial swarm, evaluated.

    Positions and velocities are drawn per coordinate from ``U[-A/2, A/2]``
    (velocities scaled by ``velocity_init_scale``) on sub-stream
    ``rng.child("init", n)`` of particle n. Seed layouts then replace the
    positions of particles ``0 .. len(seeds) - 1``; their velocities stay
    random and the other particles draw exactly as without seeds.
    """
    dim = 2 * cfg.num_antennas
    if len(seeds) > params.num_particles:
        raise ValueError(
            f"{len(seeds)} seed layouts for {params.num_particles} particles"
        )
    for apv in seeds:
        if apv.num_antennas != cfg.num_antennas:
            raise ValueError(
                f"seed layout has {apv.num_antennas} antennas, "
                f"expected {cfg.num_antennas}"
            )
    half = cfg.half_width_m
    v_half = half * params.velocity_init_scale
    positions = np.empty((params.num_particles, dim))
    velocities = np.empty((params.num_particles, dim))
    for n in range(params.num_particles):
        stream = rng.child("init", n)
        positions[n], stream = rng_draw_uniform(stream, -half, half, dim)
        velocities[n], stream = rng_draw_uniform(stream, -v_half, v_half, dim)
    for n, apv in enumerate(seeds):
        positions[n] = project(apv.as_vector(), cfg.region_side_m).as_vector()

    values = _evaluate_all(positions, evaluate, cfg, params.tau, map_fn)
    pso_fitness_evaluations_total.labels(scheme=scheme).inc(len(values))
    best = int(np.argmax([value.value for value in values]))
    return SwarmState(
        positions=positions,
        velocities=velocities,
        pbest_positions=positions.copy(),
        pbest_fitness=tuple(values),
        gbest_position=positions[best].copy(),
        gbest_fitness=values[best],
    )


def update_particle(
    state: SwarmState,
    n: int,
    omega: float,
    params: PsoParams,
    region_side_m: float,
    rng: RngStream,
    gbest_position: RVector | None = None,
) -> tuple[RVector, RVector]:
    """Velocity and projected position update of particle n.

    Args:
        state: Current swarm
        n: Particle index
        omega: Inertia weight
        params: Swarm parameters (c1, c2, per-coordinate flag)
        region_side_m: Region side A
        rng: Sub-stream for this particle and iteration
        gbest_position: Global best to steer towards (defaults to the state's)

    Returns:
        Tuple of (new velocity, new position)
    """
    gbest = state.gbest_position if gbest_position is None else gbest_position
    r = state.positions[n]
    size = r.size if params.per_coordinate else None
    tau1, rng = rng_draw_uniform(rng, 0.0, 1.0, size)
    tau2, rng = rng_draw_uniform(rng, 0.0, 1.0, size)
    velocity = (
        omega * state.velocities[n]
        + params.c1 * tau1 * (state.pbest_positions[n] - r)
        + params.c2 * tau2 * (gbest - r)
    )
    position = project(r + velocity, region_side_m).as_vector()
    return velocity, position


def _step(
    state: SwarmState,
    params: PsoParams,
    cfg: ScenarioConfig,
    rng: RngStream,
    evaluate: Evaluator,
    map_fn: MapFn,
    scheme: str,
) -> SwarmState:
    t = state.iteration + 1
    omega = inertia_weight(
        t, params.max_iterations, params.omega_min, params.omega_max
    )
    positions = state.positions.copy()
    velocities = state.velocities.copy()
    pbest_positions = state.pbest_positions.copy()
    pbest_fitness = list(state.pbest_fitness)
    gbest_position = state.gbest_position.copy()
    gbest_fitness = state.gbest_fitness

    def accept(n: int, value: FitnessValue) -> None:
        nonlocal gbest_position, gbest_fitness
        if value.value > pbest_fitness[n].value:
            pbest_fitness[n] = value
            pbest_positions[n] = positions[n]
        if value.value > gbest_fitness.value:
            gbest_fitness = value
            gbest_position = positions[n].copy()

    if params.synchronous:
        for n in range(state.num_particles):
            velocities[n], positions[n] = update_particle(
                state, n, omega, params, cfg.region_side_m, rng.child("move", t, n)
            )
        values = _evaluate_all(positions, evaluate, cfg, params.tau, map_fn)
        for n, value in enumerate(values):
            accept(n, value)
    else:
        for n in range(state.num_particles):
            velocities[n], positions[n] = update_particle(
                state,
                n,
                omega,
                params,
                cfg.region_side_m,
                rng.child("move", t, n),
                gbest_position,
            )
            accept(n, _evaluate(positions[n], evaluate, cfg, params.tau))

    pso_fitness_evaluations_total.labels(scheme=scheme).inc(state.num_particles)
    return SwarmState(
        positions=positions,
        velocities=velocities,
        pbest_positions=pbest_positions,
        pbest_fitness=tuple(pbest_fitness),
        gbest_position=gbest_position,
        gbest_fitness=gbest_fitness,
        iteration=t,
    )


def pso_optimize(
    scenario: Scenario,
    cfg: ScenarioConfig,
    params: PsoParams,
    rng: RngStream,
    solver: SolverConfig = DEFAULT_SOLVER,
    evaluate: Evaluator | None = None,
    map_fn: MapFn = map,
    scheme: str = "MA",
    seeds: Sequence[Apv] = (),
) -> PsoResult:
    """Search the antenna layout maximizing the penalized max-min rate.

    Args:
        scenario: Field-response information the search optimizes against
        cfg: Scenario configuration
        params: Swarm parameters
        rng: Stream for this search
        solver: Inner-loop tolerances (used by the default evaluator)
        evaluate: Layout evaluator; defaults to the BCD inner loop
        map_fn: Map used for batched evaluations (initial swarm and
            synchronous iterations)
        scheme: Label for metrics and logs
        seeds: Layouts placed in the first particles of the initial swarm

    Returns:
        PsoResult with the global best layout and its recomputed solution
    """
    evaluator = evaluate or partial(
        bcd_solve, scenario=scenario, cfg=cfg, solver=solver
    )
    state = init_swarm(params, cfg, rng, evaluator, map_fn, scheme, seeds)
    history = [state.gbest_fitness]
    for _ in range(params.max_iterations):
        state = _step(state, params, cfg, rng, evaluator, map_fn, scheme)
        history.append(state.gbest_fitness)

    apv = Apv.from_vector(state.gbest_position)
    solution = evaluator(apv)
    best = penalize(apv, solution, cfg, params.tau)
    logger.debug(
        "pso.completed",
        scheme=scheme,
        iterations=params.max_iterations,
        rate=best.rate,
        violations=best.violations,
    )
    return PsoResult(
        apv=apv,
        solution=solution,
        fitness=best,
        history=tuple(history),
        state=state,
    )
