"""Field-response channel model for movable-antenna receivers.

For an MA at ``r = (x, y)`` and a path arriving at elevation ``theta`` and
azimuth ``phi`` the propagation-distance difference relative to the region
origin is ``x sin(theta) cos(phi) + y cos(theta)``. The channel from user k
to MA m sums the conjugated per-path phase terms weighted by the path
responses.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.channel.scenario import Scenario, UserChannelParams
from src.numerics import CMatrix, CVector, RMatrix, RVector


@dataclass(frozen=True, eq=False)
class Apv:
    """Antenna position vector: M positions as an (M, 2) array of (x, y) metres."""

    positions: RMatrix

    def __post_init__(self) -> None:
        positions = np.asarray(self.positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] != 2 or positions.shape[0] < 1:
            raise ValueError(f"positions must have shape (M, 2), got {positions.shape}")
        object.__setattr__(self, "positions", positions)

    @classmethod
    def from_vector(cls, vector: npt.ArrayLike) -> Apv:
        """Build from a flat ``[x1, y1, ..., xM, yM]`` vector."""
        flat = np.asarray(vector, dtype=np.float64).ravel()
        if flat.size % 2:
            raise ValueError(f"flat position vector needs even length, got {flat.size}")
        return cls(flat.reshape(-1, 2).copy())

    def as_vector(self) -> RVector:
        return self.positions.ravel().copy()

    @property
    def num_antennas(self) -> int:
        return int(self.positions.shape[0])

    def in_region(self, half_width_m: float) -> bool:
        return bool(np.all(np.abs(self.positions) <= half_width_m))


def _stacked(users: Scenario | Sequence[UserChannelParams]) -> Scenario:
    return users if isinstance(users, Scenario) else Scenario(tuple(users))


def phase_difference(
    position: npt.ArrayLike, theta: npt.ArrayLike, phi: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Propagation-distance difference ``x sin(theta) cos(phi) + y cos(theta)``.

    Broadcasts over ``theta``/``phi``.
    """
    x, y = np.asarray(position, dtype=np.float64)
    theta_arr = np.asarray(theta, dtype=np.float64)
    phi_arr = np.asarray(phi, dtype=np.float64)
    return np.asarray(x * np.sin(theta_arr) * np.cos(phi_arr) + y * np.cos(theta_arr))


def field_response_vector(
    position: npt.ArrayLike, user: UserChannelParams, wavelength_m: float
) -> CVector:
    """Per-path field response ``exp(j 2 pi / lambda * rho_l)`` of length L."""
    rho = phase_difference(position, user.thetas, user.phis)
    return np.exp(1j * (2.0 * np.pi / wavelength_m) * rho)


def channel_vector(apv: Apv, user: UserChannelParams, wavelength_m: float) -> CVector:
    """Channel of one user across all M antennas."""
    f = np.stack(
        [field_response_vector(r, user, wavelength_m) for r in apv.positions], axis=0
    )
    return np.asarray(f.conj() @ user.prv, dtype=np.complex128)


def channel_matrix(
    apv: Apv, users: Scenario | Sequence[UserChannelParams], wavelength_m: float
) -> CMatrix:
    """Channel matrix H of shape (M, K), column k being user k's channel.

    Args:
        apv: Antenna positions
        users: Per-user field-response information
        wavelength_m: Carrier wavelength

    Returns:
        Complex (M, K) matrix
    """
    scenario = _stacked(users)
    x = apv.positions[:, 0][:, None, None]
    y = apv.positions[:, 1][:, None, None]
    # (M, K, L) distance differences
    rho = x * (np.sin(scenario.thetas) * np.cos(scenario.phis))[None] + y * np.cos(
        scenario.thetas
    )[None]
    phase = np.exp(-1j * (2.0 * np.pi / wavelength_m) * rho)
    return np.asarray(np.sum(phase * scenario.prv[None], axis=2), dtype=np.complex128)


def channel_power_gains(h: CMatrix) -> RVector:
    """Per-user channel power ``||h_k||^2``."""
    return np.asarray(np.sum(np.abs(h) ** 2, axis=0), dtype=np.float64)


def normalized_cross_correlation(h: CMatrix) -> RMatrix:
    """Matrix of ``|h_k^H h_i| / (||h_k|| ||h_i||)``.

    The diagonal is 1 for non-zero channels; entries involving a zero
    channel are 0.
    """
    gram = np.abs(h.conj().T @ h)
    norms = np.sqrt(channel_power_gains(h))
    denom = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(denom > 0, gram / np.where(denom > 0, denom, 1.0), 0.0)
    return np.asarray(corr, dtype=np.float64)


def gain_map(
    users: Scenario | Sequence[UserChannelParams],
    wavelength_m: float,
    half_width_m: float,
    points: int = 61,
) -> tuple[RVector, RVector, npt.NDArray[np.float64]]:
    """Single-antenna channel power over a grid of the movement region.

    Args:
        users: Per-user field-response information
        wavelength_m: Carrier wavelength
        half_width_m: Region half-width A/2
        points: Grid points per axis

    Returns:
        Tuple of (xs, ys, gains) with ``gains[k, iy, ix] = |h_k(xs[ix], ys[iy])|^2``
    """
    if points < 2:
        raise ValueError(f"gain map needs at least 2 points per axis, got {points}")
    scenario = _stacked(users)
    xs = np.linspace(-half_width_m, half_width_m, points)
    ys = np.linspace(-half_width_m, half_width_m, points)
    grid_x, grid_y = np.meshgrid(xs, ys)
    apv = Apv(np.column_stack([grid_x.ravel(), grid_y.ravel()]))
    h = channel_matrix(apv, scenario, wavelength_m)
    gains = (np.abs(h) ** 2).T.reshape(len(scenario), points, points)
    return xs, ys, gains
