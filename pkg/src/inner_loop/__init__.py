"""
Inner Loop Module

Alternating combiner/power optimization for a fixed antenna layout.
"""

from src.inner_loop.bcd import (
    DEFAULT_SOLVER,
    InnerSolution,
    SolverConfig,
    bcd_solve,
    bcd_solve_channel,
)


__all__ = [
    "DEFAULT_SOLVER",
    "InnerSolution",
    "SolverConfig",
    "bcd_solve",
    "bcd_solve_channel",
]
