"""
Power Module

Equal-SINR power solves and the bisection search for the max-min target.
"""

from src.power.control import (
    BisectionProbe,
    BisectionResult,
    bisection_power,
    build_D,
    saturate_power,
    solve_power_for_eta,
)


__all__ = [
    "BisectionProbe",
    "BisectionResult",
    "bisection_power",
    "build_D",
    "saturate_power",
    "solve_power_for_eta",
]
