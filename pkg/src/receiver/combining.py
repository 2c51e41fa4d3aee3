"""Linear receive combining and post-combining SINR.

The SINR of user k under combiner column ``w_k`` can be written with the
gain matrix ``A[k, i] = |w_k^H h_i|^2`` and noise vector
``b[k] = ||w_k||^2 sigma^2`` as ``p_k A[k, k] / (sum_{i != k} p_i A[k, i] + b[k])``.
The power-control stage consumes (A, b) directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from src.exceptions import (
    DegenerateCombinerError,
    RankDeficientError,
    SingularMatrixError,
)
from src.numerics import CMatrix, RMatrix, RVector, as_cmatrix, hermitian_solve


SINR_CAP = 1e30
DENOMINATOR_FLOOR = 1e-30


class CombinerKind(str, Enum):
    """Receive combining strategy."""

    MMSE = "MMSE"
    ZF = "ZF"


@dataclass(frozen=True, eq=False)
class Combiner:
    """Combining matrix W of shape (M, K); column k combines user k."""

    w: CMatrix
    kind: CombinerKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", as_cmatrix(self.w))

    @property
    def num_users(self) -> int:
        return int(self.w.shape[1])


@dataclass(frozen=True, eq=False)
class SinrReport:
    """Per-user SINR (linear), rates log2(1 + SINR) and the minimum rate."""

    gamma: RVector
    rates: RVector
    min_rate: float


def _check_power(p: npt.ArrayLike, num_users: int) -> RVector:
    power = np.asarray(p, dtype=np.float64)
    if power.shape != (num_users,):
        raise ValueError(
            f"power vector must have shape ({num_users},), got {power.shape}"
        )
    if np.any(power < 0) or not np.all(np.isfinite(power)):
        raise ValueError("powers must be finite and non-negative")
    return power


def _check_shapes(combiner: Combiner, h: CMatrix) -> None:
    if combiner.w.shape != h.shape:
        raise ValueError(
            f"combiner shape {combiner.w.shape} does not match channel shape {h.shape}"
        )


def mmse_combiner(h: npt.ArrayLike, p: npt.ArrayLike, sigma2: float) -> Combiner:
    """MMSE combiner ``W = (H P H^H + sigma^2 I)^-1 H``.

    Args:
        h: Channel matrix (M, K)
        p: Transmit powers (K,) in watts
        sigma2: Noise power in watts

    Returns:
        MMSE combiner

    Raises:
        ValueError: If powers are negative or ``sigma2`` is not positive
        SingularMatrixError: Propagated from the solve (not expected for sigma2 > 0)
    """
    channel = as_cmatrix(h)
    power = _check_power(p, channel.shape[1])
    if not sigma2 > 0:
        raise ValueError(f"noise power must be positive, got {sigma2}")

    covariance = (channel * power) @ channel.conj().T
    covariance = 0.5 * (covariance + covariance.conj().T)
    covariance += sigma2 * np.eye(channel.shape[0])
    return Combiner(hermitian_solve(covariance, channel), CombinerKind.MMSE)


def zf_combiner(h: npt.ArrayLike) -> Combiner:
    """Zero-forcing combiner ``W = H (H^H H)^-1``, so that ``W^H H = I``.

    Raises:
        RankDeficientError: If ``H^H H`` is singular (including K > M)
    """
    channel = as_cmatrix(h)
    gram = channel.conj().T @ channel
    gram = 0.5 * (gram + gram.conj().T)
    try:
        # W^H = G^-1 H^H since the Gram matrix is Hermitian
        w_h = hermitian_solve(gram, channel.conj().T)
    except SingularMatrixError as e:
        raise RankDeficientError("zf_combiner", e.pivot, e.threshold) from e
    return Combiner(w_h.conj().T, CombinerKind.ZF)


def _gains(combiner: Combiner, h: CMatrix, sigma2: float) -> tuple[RMatrix, RVector]:
    projections = combiner.w.conj().T @ h
    a = np.abs(projections) ** 2
    b = np.sum(np.abs(combiner.w) ** 2, axis=0) * sigma2
    return np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)


def build_A_b(  # noqa: N802
    combiner: Combiner, h: npt.ArrayLike, sigma2: float
) -> tuple[RMatrix, RVector]:
    """Gain matrix A and noise vector b for an arbitrary combiner.

    Args:
        combiner: Any combiner (not only MMSE)
        h: Channel matrix (M, K)
        sigma2: Noise power in watts

    Returns:
        Tuple of (A, b) with ``A[k, i] = |w_k^H h_i|^2`` and
        ``b[k] = ||w_k||^2 sigma^2``

    Raises:
        DegenerateCombinerError: If some combining vector is zero
    """
    channel = as_cmatrix(h)
    _check_shapes(combiner, channel)
    norms = np.linalg.norm(combiner.w, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise DegenerateCombinerError(int(zero[0]))
    return _gains(combiner, channel, sigma2)


def split_sinr_terms(a: RMatrix, p: RVector) -> tuple[RVector, RVector]:
    """Per-user desired-signal and interference powers before noise normalization."""
    signal = p * np.diag(a)
    interference = a @ p - signal
    return signal, np.maximum(interference, 0.0)


def sinr_from_terms(signal: RVector, interference: RVector, b: RVector) -> RVector:
    """SINR with guarded denominators.

    A denominator below ``DENOMINATOR_FLOOR`` yields ``SINR_CAP`` for positive
    signal and 0 otherwise.
    """
    denominator = interference + b
    tiny = denominator < DENOMINATOR_FLOOR
    safe = np.where(tiny, 1.0, denominator)
    gamma = np.where(tiny, np.where(signal > 0, SINR_CAP, 0.0), signal / safe)
    return np.asarray(gamma, dtype=np.float64)


def sinr_report(
    combiner: Combiner, h: npt.ArrayLike, p: npt.ArrayLike, sigma2: float
) -> SinrReport:
    """Evaluate per-user SINR and achievable rates.

    A zero combining vector gives that user SINR 0 rather than raising.
    """
    channel = as_cmatrix(h)
    _check_shapes(combiner, channel)
    power = _check_power(p, channel.shape[1])
    a, b = _gains(combiner, channel, sigma2)
    gamma = sinr_from_terms(*split_sinr_terms(a, power), b)
    rates = np.log2(1.0 + gamma)
    return SinrReport(gamma=gamma, rates=rates, min_rate=float(np.min(rates)))


def normalized_signal_interference(
    combiner: Combiner, h: npt.ArrayLike, p: npt.ArrayLike, sigma2: float
) -> tuple[float, float]:
    """Mean over users of signal and interference powers normalized by b_k."""
    channel = as_cmatrix(h)
    a, b = build_A_b(combiner, channel, sigma2)
    signal, interference = split_sinr_terms(a, _check_power(p, channel.shape[1]))
    return float(np.mean(signal / b)), float(np.mean(interference / b))
