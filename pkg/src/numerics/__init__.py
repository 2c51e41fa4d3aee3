"""
Numerics Module

Complex linear solves and reproducible random streams shared by all solvers.
"""

from src.numerics.linalg import (
    CMatrix,
    CVector,
    RMatrix,
    RVector,
    as_cmatrix,
    general_solve,
    hermitian_solve,
)
from src.numerics.rng import RngStream, rng_draw_cscg, rng_draw_uniform


__all__ = [
    "CMatrix",
    "CVector",
    "RMatrix",
    "RVector",
    "RngStream",
    "as_cmatrix",
    "general_solve",
    "hermitian_solve",
    "rng_draw_cscg",
    "rng_draw_uniform",
]
