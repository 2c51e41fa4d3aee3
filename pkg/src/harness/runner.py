"""Monte Carlo experiment orchestration.

Work is split into units of one (sweep value, trial) pair. A unit draws the
actual scenario from ``root.child("scenario", trial)``, derives estimated
field-response information from ``root.child("fri", trial)`` and runs every
requested scheme on that shared realization. Layouts are optimized on the
estimated information and rated on the actual one.

Units run inline or on a process pool; records are sorted afterwards, so
output does not depend on the worker count.
"""

from __future__ import annotations

import time
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from functools import partial

import numpy as np
from pydantic import ValidationError

from src.baselines import (
    SCHEME_ORDER,
    Scheme,
    aps_optimize,
    fpa_layout,
    fpa_seeds,
    mpzf_evaluate,
    mpzf_optimize,
)
from src.channel import (
    Apv,
    FriErrorModel,
    Scenario,
    ScenarioConfig,
    generate_scenario,
    perturb_fri,
)
from src.config import settings
from src.exceptions import (
    ConfigurationError,
    DegenerateCombinerError,
    RegionTooSmallError,
)
from src.harness.experiment import FRI_AXES, ExperimentSpec, apply_sweep
from src.harness.results import ConvergencePoint, TrialRecord
from src.inner_loop import DEFAULT_SOLVER, InnerSolution, SolverConfig, bcd_solve
from src.numerics import RngStream
from src.observability.logging import (
    bind_experiment_context,
    bind_trial_context,
    configure_logging,
    get_logger,
    log_trial_completed,
)
from src.observability.metrics import trial_duration_seconds, trials_completed_total
from src.pso import MapFn, PsoParams, pso_optimize, violation_set_size
from src.receiver import normalized_signal_interference


logger = get_logger(__name__)

POWER_FLOOR = 1e-30


@dataclass(frozen=True, slots=True)
class TrialUnit:
    sweep_index: int
    sweep_value: float
    trial: int


@dataclass(frozen=True, eq=False)
class SchemeOutcome:
    """Layout chosen by a scheme and its solution on the actual channel."""

    scheme: Scheme
    apv: Apv
    solution: InnerSolution
    iterations: int
    violations: int


def run_scheme(
    scheme: Scheme,
    estimated: Scenario,
    actual: Scenario,
    cfg: ScenarioConfig,
    spec: ExperimentSpec,
    rng: RngStream,
    map_fn: MapFn = map,
) -> SchemeOutcome:
    """Optimize with one scheme on ``estimated`` and rate the layout on ``actual``.

    ``map_fn`` fans out swarm and grid-candidate evaluations.
    """
    solver = spec.solver
    same = estimated is actual
    seeds = fpa_seeds(cfg) if spec.pso.seed_fixed_array else ()

    if scheme is Scheme.MA:
        result = pso_optimize(
            estimated, cfg, spec.pso, rng, solver, map_fn=map_fn, seeds=seeds
        )
        apv, iterations = result.apv, spec.pso.max_iterations
        solution = result.solution if same else bcd_solve(apv, actual, cfg, solver)
    elif scheme is Scheme.FPA:
        apv = fpa_layout(cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m)
        solution = bcd_solve(apv, actual, cfg, solver)
        iterations = solution.iterations
    elif scheme is Scheme.APS:
        aps = aps_optimize(estimated, cfg, solver, spec.aps_max_cycles, map_fn)
        apv, iterations = aps.apv, aps.cycles
        solution = aps.solution if same else bcd_solve(apv, actual, cfg, solver)
    else:
        result = mpzf_optimize(estimated, cfg, spec.pso, rng, map_fn, seeds)
        apv, iterations = result.apv, spec.pso.max_iterations
        solution = result.solution if same else mpzf_evaluate(apv, actual, cfg)

    violations = violation_set_size(apv, cfg.min_distance_m)
    return SchemeOutcome(scheme, apv, solution, iterations, violations)


def _draw_scenarios(
    cfg: ScenarioConfig, err: FriErrorModel, root: RngStream, trial: int
) -> tuple[Scenario, Scenario]:
    actual = generate_scenario(cfg, root.child("scenario", trial))
    if err.mu == 0 and err.delta == 0:
        return actual, actual
    return perturb_fri(actual, err, root.child("fri", trial)), actual


def run_trial(
    spec: ExperimentSpec, unit: TrialUnit, map_fn: MapFn = map
) -> list[tuple[TrialRecord, float]]:
    """Run every scheme of ``spec`` on one (sweep value, trial) scenario.

    Returns:
        Pairs of (record, measured seconds); ``wall_ms`` in the record is 0
        unless ``spec.timing`` is set
    """
    bind_trial_context(unit.sweep_value, unit.trial)
    cfg, err = apply_sweep(spec, unit.sweep_value)
    root = RngStream(spec.seed)
    estimated, actual = _draw_scenarios(cfg, err, root, unit.trial)
    digest = actual.fingerprint()

    results = []
    for scheme in spec.schemes:
        started = time.perf_counter()
        rng = root.child("pso", scheme.value, unit.trial)
        outcome = run_scheme(scheme, estimated, actual, cfg, spec, rng, map_fn)
        elapsed = time.perf_counter() - started
        record = TrialRecord(
            scheme=scheme,
            sweep_param=spec.effective_sweep.param,
            sweep_value=unit.sweep_value,
            trial=unit.trial,
            seed=spec.seed,
            min_rate_bps_hz=max(outcome.solution.min_rate, 0.0),
            iterations=outcome.iterations,
            violations=outcome.violations,
            wall_ms=elapsed * 1000.0 if spec.timing else 0.0,
            scenario_digest=digest,
        )
        log_trial_completed(
            logger,
            scheme.value,
            record.min_rate_bps_hz,
            outcome.violations,
            elapsed * 1000.0,
        )
        results.append((record, elapsed))
    return results


def check_sweep_point(
    spec: ExperimentSpec, value: float
) -> tuple[ScenarioConfig, FriErrorModel]:
    """Resolve one sweep point, checking the fixed-array fit when it is needed.

    Raises:
        ConfigurationError: If the point gives an invalid scenario or the
            fixed array does not fit the region
    """
    try:
        cfg, err = apply_sweep(spec, value)
        if {Scheme.FPA, Scheme.APS} & set(spec.schemes):
            fpa_layout(cfg.num_antennas, cfg.wavelength_m, cfg.region_side_m)
    except (ValidationError, RegionTooSmallError) as e:
        raise ConfigurationError(
            spec.name, f"{spec.effective_sweep.param}={value}: {e}"
        ) from e
    return cfg, err


def validate_experiment(spec: ExperimentSpec) -> None:
    """Check every sweep point before any work starts.

    Raises:
        ConfigurationError: From the first invalid point
    """
    for value in spec.effective_sweep.values:
        check_sweep_point(spec, value)


def _init_worker(log_level: str | None, experiment: str, seed: int) -> None:
    configure_logging(log_level)
    bind_experiment_context(experiment, seed)


@contextmanager
def evaluation_map(
    workers: int | None,
    log_level: str | None = None,
    experiment: str = "",
    seed: int = 0,
) -> Iterator[MapFn]:
    """Map for fitness and candidate evaluations of a single scenario.

    Yields the builtin ``map`` for one worker and a process pool's ``map``
    otherwise. Both preserve input order, so results are identical.
    """
    count = workers or settings.workers or 1
    if count <= 1:
        yield map
        return
    with ProcessPoolExecutor(
        max_workers=count,
        initializer=_init_worker,
        initargs=(log_level, experiment, seed),
    ) as executor:
        yield executor.map


def _order_key(
    record: TrialRecord, sweep_index: dict[float, int]
) -> tuple[int, int, int]:
    scheme = SCHEME_ORDER.index(record.scheme)
    return (scheme, sweep_index[record.sweep_value], record.trial)


def run_experiment(
    spec: ExperimentSpec,
    workers: int | None = None,
    log_level: str | None = None,
) -> list[TrialRecord]:
    """Run all schemes over every sweep value and trial.

    Args:
        spec: Experiment description
        workers: Process count (falls back to ``settings.workers``, then 1)
        log_level: Log level for worker processes

    Returns:
        Records sorted by scheme, sweep value and trial

    Raises:
        ConfigurationError: If validation fails (before any trial runs)
    """
    validate_experiment(spec)
    sweep = spec.effective_sweep
    units = [
        TrialUnit(index, value, trial)
        for index, value in enumerate(sweep.values)
        for trial in range(spec.trials)
    ]
    worker_count = workers or settings.workers or 1
    logger.info(
        "experiment.started",
        name=spec.name,
        sweep=sweep.param,
        points=len(sweep.values),
        trials=spec.trials,
        schemes=[s.value for s in spec.schemes],
        workers=worker_count,
    )

    task = partial(run_trial, spec)
    if worker_count > 1 and len(units) > 1:
        with ProcessPoolExecutor(
            max_workers=worker_count,
            initializer=_init_worker,
            initargs=(log_level, spec.name, spec.seed),
        ) as executor:
            batches = list(executor.map(task, units))
    else:
        # a single unit fans out its evaluations instead
        with evaluation_map(worker_count, log_level, spec.name, spec.seed) as map_fn:
            batches = [task(unit, map_fn) for unit in units]

    records = []
    for batch in batches:
        for record, elapsed in batch:
            trials_completed_total.labels(scheme=record.scheme.value).inc()
            trial_duration_seconds.labels(scheme=record.scheme.value).observe(elapsed)
            records.append(record)

    sweep_index = {value: index for index, value in enumerate(sweep.values)}
    records.sort(key=lambda record: _order_key(record, sweep_index))
    logger.info("experiment.completed", name=spec.name, records=len(records))
    return records


def run_fri_robustness(
    spec: ExperimentSpec,
    workers: int | None = None,
    log_level: str | None = None,
) -> list[TrialRecord]:
    """Imperfect field-response sweep over ``mu`` or ``delta``.

    Raises:
        ConfigurationError: If the sweep is not over an error axis or the
            other error component is non-zero
    """
    sweep = spec.sweep
    if sweep is None or sweep.param not in FRI_AXES:
        raise ConfigurationError(
            spec.name, "robustness sweeps need param mu or delta"
        )
    other = "delta" if sweep.param == "mu" else "mu"
    if getattr(spec.fri, other) != 0:
        raise ConfigurationError(
            spec.name, f"{other} must be 0 while sweeping {sweep.param}"
        )
    return run_experiment(spec, workers, log_level)


def _to_db(value: float) -> float:
    return float(10.0 * np.log10(max(value, POWER_FLOOR)))


def run_convergence(
    cfg: ScenarioConfig,
    params: PsoParams,
    seed: int,
    solver: SolverConfig = DEFAULT_SOLVER,
    workers: int | None = None,
) -> list[ConvergencePoint]:
    """Per-iteration global best of one swarm search on one scenario.

    Besides fitness, rate and violations each point carries the mean over
    users of the desired-signal and interference powers at the global best,
    both normalized by the post-combining noise power. With ``workers`` > 1
    the swarm evaluations run on a process pool.
    """
    root = RngStream(seed)
    scenario = generate_scenario(cfg, root.child("scenario", 0))
    rng = root.child("pso", Scheme.MA.value, 0)
    seeds = fpa_seeds(cfg) if params.seed_fixed_array else ()
    with evaluation_map(workers, experiment="convergence", seed=seed) as map_fn:
        result = pso_optimize(
            scenario, cfg, params, rng, solver, map_fn=map_fn, seeds=seeds
        )

    points = []
    for t, best in enumerate(result.history):
        signal = interference = 0.0
        solution = best.solution
        if solution is not None and solution.combiner is not None:
            try:
                signal, interference = normalized_signal_interference(
                    solution.combiner, solution.h, solution.p, cfg.sigma2_w
                )
            except DegenerateCombinerError:
                signal = interference = 0.0
        points.append(
            ConvergencePoint(
                iteration=t,
                fitness=best.value,
                rate_bps_hz=best.rate,
                violations=best.violations,
                signal_power=signal,
                interference_power=interference,
                signal_power_db=_to_db(signal),
                interference_power_db=_to_db(interference),
            )
        )
    return points
