"""
Baselines Module

Benchmark schemes compared against the movable-antenna optimizer.
"""

from enum import Enum

from src.baselines.aps import ApsResult, aps_grid, aps_optimize
from src.baselines.fpa import fpa_evaluate, fpa_layout, fpa_seeds
from src.baselines.mpzf import mpzf_evaluate, mpzf_optimize, zf_max_power_solution


class Scheme(str, Enum):
    """Optimization scheme tag."""

    MA = "MA"
    FPA = "FPA"
    APS = "APS"
    MPZF = "MPZF"


SCHEME_ORDER: tuple[Scheme, ...] = (Scheme.MA, Scheme.FPA, Scheme.APS, Scheme.MPZF)


__all__ = [
    "SCHEME_ORDER",
    "ApsResult",
    "Scheme",
    "aps_grid",
    "aps_optimize",
    "fpa_evaluate",
    "fpa_layout",
    "fpa_seeds",
    "mpzf_evaluate",
    "mpzf_optimize",
    "zf_max_power_solution",
]
