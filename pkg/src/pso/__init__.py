"""
PSO Module

Particle swarm search over antenna layouts with boundary projection,
linearly decreasing inertia and a minimum-spacing penalty.
"""

from src.pso.swarm import (
    Evaluator,
    FitnessValue,
    MapFn,
    PsoParams,
    PsoResult,
    SwarmState,
    fitness,
    inertia_weight,
    init_swarm,
    penalize,
    project,
    pso_optimize,
    update_particle,
    violation_set_size,
)


__all__ = [
    "Evaluator",
    "FitnessValue",
    "MapFn",
    "PsoParams",
    "PsoResult",
    "SwarmState",
    "fitness",
    "inertia_weight",
    "init_swarm",
    "penalize",
    "project",
    "pso_optimize",
    "update_particle",
    "violation_set_size",
]
