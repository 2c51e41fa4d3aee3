"""Dense complex linear solves with typed singularity reporting.

Problem sizes are tiny (M, K <= ~16), so dense LAPACK factorizations are used
directly. Both solvers refuse to return garbage: a pivot smaller than
``PIVOT_RTOL`` times the largest diagonal magnitude of the input raises
``SingularMatrixError`` and every result is residual-checked.
"""

from __future__ import annotations

import warnings
from typing import TypeAlias

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.exceptions import SingularMatrixError
from src.observability.metrics import singular_solves_total


CMatrix: TypeAlias = npt.NDArray[np.complex128]
CVector: TypeAlias = npt.NDArray[np.complex128]
RVector: TypeAlias = npt.NDArray[np.float64]
RMatrix: TypeAlias = npt.NDArray[np.float64]

PIVOT_RTOL = 1e-14
RESIDUAL_RTOL = 1e-10
HERMITIAN_RTOL = 1e-10


def as_cmatrix(data: npt.ArrayLike) -> CMatrix:
    """Validate and convert ``data`` to a finite 2-D complex matrix.

    Raises:
        ValueError: If the input is not 2-D, is empty, or has non-finite entries
    """
    matrix = np.asarray(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix has non-finite entries")
    return matrix


def _square(a: npt.NDArray[np.generic], operation: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{operation}: matrix must be square, got {a.shape}")


def _check_residual(
    operation: str,
    a: npt.NDArray[np.generic],
    x: npt.NDArray[np.generic],
    b: npt.NDArray[np.generic],
    min_pivot: float,
) -> None:
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return
    residual = float(np.linalg.norm(a @ x - b)) / b_norm
    if not np.isfinite(residual) or residual > RESIDUAL_RTOL:
        singular_solves_total.labels(operation=operation).inc()
        raise SingularMatrixError(operation, min_pivot, RESIDUAL_RTOL)


def hermitian_solve(a: npt.ArrayLike, b: npt.ArrayLike) -> CMatrix:
    """Solve ``A X = B`` for Hermitian positive definite ``A`` via Cholesky.

    Args:
        a: Square Hermitian positive definite matrix
        b: Right-hand side with ``b.rows == a.rows`` (matrix or vector)

    Returns:
        Solution ``X`` with the same shape as ``b``

    Raises:
        ValueError: If shapes disagree or ``a`` is not Hermitian within tolerance
        SingularMatrixError: If a Cholesky pivot is below the threshold or
            the factorization fails
    """
    a_mat = np.asarray(a, dtype=np.complex128)
    b_mat = np.asarray(b, dtype=np.complex128)
    _square(a_mat, "hermitian_solve")
    if b_mat.shape[0] != a_mat.shape[0]:
        raise ValueError(
            f"hermitian_solve: rhs has {b_mat.shape[0]} rows, expected {a_mat.shape[0]}"
        )

    scale = float(np.max(np.abs(np.diag(a_mat))))
    skew = float(np.linalg.norm(a_mat - a_mat.conj().T))
    if skew > HERMITIAN_RTOL * max(float(np.linalg.norm(a_mat)), np.finfo(float).tiny):
        raise ValueError("hermitian_solve: matrix is not Hermitian")

    threshold = PIVOT_RTOL * scale
    try:
        lower = scipy.linalg.cholesky(a_mat, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        singular_solves_total.labels(operation="hermitian_solve").inc()
        raise SingularMatrixError("hermitian_solve", 0.0, threshold) from e

    # Cholesky pivots are the squared diagonal of the factor
    pivots = np.abs(np.diag(lower)) ** 2
    min_pivot = float(np.min(pivots))
    if not min_pivot > threshold:
        singular_solves_total.labels(operation="hermitian_solve").inc()
        raise SingularMatrixError("hermitian_solve", min_pivot, threshold)

    x = scipy.linalg.cho_solve((lower, True), b_mat, check_finite=False)
    _check_residual("hermitian_solve", a_mat, x, b_mat, min_pivot)
    return np.asarray(x, dtype=np.complex128)


def general_solve(a: npt.ArrayLike, b: npt.ArrayLike) -> CVector:
    """Solve ``A x = b`` with partial-pivoted LU.

    Used for the power-control system whose matrix is not Hermitian.

    Args:
        a: Square matrix
        b: Right-hand side vector of matching dimension

    Returns:
        Solution vector (complex dtype; callers take the real part when
        the system is real)

    Raises:
        ValueError: If shapes disagree
        SingularMatrixError: If an LU pivot is below the threshold
    """
    a_mat = np.asarray(a, dtype=np.complex128)
    b_vec = np.asarray(b, dtype=np.complex128)
    _square(a_mat, "general_solve")
    if b_vec.shape[0] != a_mat.shape[0]:
        raise ValueError(
            f"general_solve: rhs has length {b_vec.shape[0]}, expected {a_mat.shape[0]}"
        )

    threshold = PIVOT_RTOL * float(np.max(np.abs(np.diag(a_mat))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a_mat, check_finite=False)

    min_pivot = float(np.min(np.abs(np.diag(lu))))
    if not min_pivot > threshold or not np.isfinite(min_pivot):
        singular_solves_total.labels(operation="general_solve").inc()
        raise SingularMatrixError("general_solve", min_pivot, threshold)

    x = scipy.linalg.lu_solve((lu, piv), b_vec, check_finite=False)
    _check_residual("general_solve", a_mat, x, b_vec, min_pivot)
    return np.asarray(x, dtype=np.complex128)
