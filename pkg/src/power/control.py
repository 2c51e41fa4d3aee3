"""Max-min power control for a fixed receive combiner.

For a target SINR eta, requiring every user's SINR to equal eta yields the
linear system ``D(eta) p = b`` with ``D[k, k] = A[k, k] / eta`` and
``D[k, i] = -A[k, i]``. Feasibility of eta means the solution lies in the
power box, and a bisection over eta finds the largest feasible target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from src.channel import channel_power_gains
from src.exceptions import InfeasiblePowerError, SingularMatrixError
from src.numerics import CMatrix, RMatrix, RVector, general_solve
from src.observability.metrics import bisection_iterations
from src.receiver import Combiner, build_A_b


NEGATIVE_POWER_TOL = 1e-12
POWER_BOX_RTOL = 1e-12


@dataclass(frozen=True, slots=True, eq=False)
class BisectionProbe:
    """One midpoint of the bisection search; ``p`` is set only when feasible."""

    eta: float
    feasible: bool
    p: RVector | None


@dataclass(frozen=True, eq=False)
class BisectionResult:
    """Outcome of the bisection power search.

    Attributes:
        p: Power vector of the last feasible midpoint (zeros if none)
        eta: Largest feasible target SINR found (linear)
        iterations: Midpoints evaluated
        feasible: Whether ``p`` lies in the power box (always true)
        eta_max: Initial upper bound of the search
        probes: Every midpoint in evaluation order
    """

    p: RVector
    eta: float
    iterations: int
    feasible: bool
    eta_max: float
    probes: tuple[BisectionProbe, ...] = field(default=(), repr=False)


def build_D(a: npt.ArrayLike, eta: float) -> RMatrix:  # noqa: N802
    """Equal-SINR system matrix for target ``eta``.

    Raises:
        ValueError: If ``eta`` is not positive or ``a`` is not square
    """
    if not eta > 0:
        raise ValueError(f"target SINR must be positive, got {eta}")
    gains = np.asarray(a, dtype=np.float64)
    if gains.ndim != 2 or gains.shape[0] != gains.shape[1]:
        raise ValueError(f"gain matrix must be square, got {gains.shape}")
    d = -gains.copy()
    np.fill_diagonal(d, np.diag(gains) / eta)
    return d


def solve_power_for_eta(a: npt.ArrayLike, b: npt.ArrayLike, eta: float) -> RVector:
    """Power vector that gives every user SINR exactly ``eta``.

    Args:
        a: Gain matrix (K, K)
        b: Noise vector (K,)
        eta: Target SINR, linear

    Returns:
        Non-negative power vector (round-off negatives clamped to 0)

    Raises:
        InfeasiblePowerError: If a user has no direct gain, ``D(eta)`` is
            singular, or the solution is non-finite or negative
    """
    gains = np.asarray(a, dtype=np.float64)
    noise = np.asarray(b, dtype=np.float64)
    if np.any(np.diag(gains) <= 0):
        raise InfeasiblePowerError(eta, "a user has zero direct gain")
    try:
        solution = general_solve(build_D(gains, eta), noise)
    except SingularMatrixError as e:
        raise InfeasiblePowerError(eta, str(e)) from e

    p = solution.real
    if not np.all(np.isfinite(p)):
        raise InfeasiblePowerError(eta, "non-finite power")
    if np.min(p) < -NEGATIVE_POWER_TOL:
        raise InfeasiblePowerError(eta, f"negative power {np.min(p):.3e}")
    return np.maximum(p, 0.0)


def bisection_power(
    h: CMatrix,
    combiner: Combiner,
    pmax: float,
    sigma2: float,
    epsilon: float,
) -> BisectionResult:
    """Largest common SINR achievable under the power budget for fixed W.

    The search brackets ``(0, pmax * min_k ||h_k||^2 / sigma2]`` and halves it
    until its width is at most ``epsilon`` (linear SINR units).

    With a single user there is no interference, so the user transmits at
    ``pmax`` and the result is the closed form with no midpoints.

    Args:
        h: Channel matrix (M, K)
        combiner: Fixed combiner
        pmax: Per-user power budget in watts
        sigma2: Noise power in watts
        epsilon: Bracket tolerance

    Returns:
        BisectionResult holding the power vector of the last feasible midpoint
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if pmax < 0:
        raise ValueError(f"pmax must be non-negative, got {pmax}")

    num_users = h.shape[1]
    eta_max = pmax * float(np.min(channel_power_gains(h))) / sigma2
    best = np.zeros(num_users)
    if not eta_max > 0:
        bisection_iterations.observe(0)
        return BisectionResult(best, 0.0, 0, True, max(eta_max, 0.0))

    a, b = build_A_b(combiner, h, sigma2)
    if num_users == 1:
        eta = min(pmax * float(a[0, 0]) / float(b[0]), eta_max)
        bisection_iterations.observe(0)
        return BisectionResult(np.array([pmax]), eta, 0, True, eta_max)

    lo, hi = 0.0, eta_max
    probes: list[BisectionProbe] = []
    while hi - lo > epsilon:
        mid = 0.5 * (lo + hi)
        try:
            p = solve_power_for_eta(a, b, mid)
            ok = bool(np.max(p) <= pmax * (1.0 + POWER_BOX_RTOL))
        except InfeasiblePowerError:
            p, ok = None, False
        if ok and p is not None:
            p = np.minimum(p, pmax)
            lo, best = mid, p
        else:
            hi = mid
        probes.append(BisectionProbe(mid, ok, p if ok else None))

    bisection_iterations.observe(len(probes))
    return BisectionResult(best, lo, len(probes), True, eta_max, tuple(probes))


def saturate_power(p: npt.ArrayLike, pmax: float) -> RVector:
    """Scale powers so the largest equals ``pmax``.

    For a fixed combiner every SINR is non-decreasing under a common power
    scale factor ``c >= 1``, so this never lowers the minimum SINR. A zero
    vector is returned unchanged.
    """
    power = np.asarray(p, dtype=np.float64)
    peak = float(np.max(power)) if power.size else 0.0
    if peak <= 0:
        return power.copy()
    return np.minimum(power * (pmax / peak), pmax)
