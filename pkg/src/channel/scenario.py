"""Scenario configuration and stochastic field-response information.

A scenario is one realization of all users' distances, angles of arrival and
path-response coefficients. Optimizers consume estimated parameters while
final evaluation consumes the actual ones; both are plain ``Scenario`` values.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from src.numerics import RngStream, RVector, rng_draw_cscg, rng_draw_uniform
from src.numerics.linalg import CVector


HALF_PI = np.pi / 2.0


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return float(10.0 ** (value_db / 10.0))


def dbm_to_watts(value_dbm: float) -> float:
    """Convert a power level in dBm to watts."""
    return float(10.0 ** ((value_dbm - 30.0) / 10.0))


class ScenarioConfig(BaseModel):
    """Physical parameters of one experiment.

    Field aliases are the canonical configuration keys (``M``, ``K``,
    ``lambda_m``, ``A_over_lambda`` ...). Defaults reproduce the full-scale
    simulation setup. Linear-scale quantities are converted once at
    construction and exposed as properties.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    num_antennas: int = Field(default=16, alias="M", ge=1, description="MA count")
    num_users: int = Field(default=12, alias="K", ge=1, description="User count")
    num_paths: int = Field(default=10, alias="L", ge=1, description="Paths per user")
    wavelength_m: float = Field(
        default=0.1, alias="lambda_m", gt=0, description="Carrier wavelength (m)"
    )
    a_over_lambda: float = Field(
        default=3.0, alias="A_over_lambda", gt=0, description="Region side / lambda"
    )
    d_over_lambda: float = Field(
        default=0.5, alias="D_over_lambda", gt=0, description="Min MA spacing / lambda"
    )
    rho_db: float = Field(default=-40.0, description="Path loss at 1 m (dB)")
    alpha: float = Field(default=2.8, ge=0, description="Path-loss exponent")
    sigma2_dbm: float = Field(default=-80.0, description="Noise power (dBm)")
    pmax_dbm: float = Field(default=10.0, description="Per-user max power (dBm)")
    d_min_m: float = Field(default=20.0, alias="dmin_m", gt=0)
    d_max_m: float = Field(default=100.0, alias="dmax_m", gt=0)

    _rho_linear: float = PrivateAttr()
    _sigma2_w: float = PrivateAttr()
    _pmax_w: float = PrivateAttr()

    @model_validator(mode="after")
    def _check_consistency(self) -> ScenarioConfig:
        if self.num_users > self.num_antennas:
            raise ValueError(
                f"K={self.num_users} users exceed M={self.num_antennas} antennas"
            )
        if self.d_min_m > self.d_max_m:
            raise ValueError(
                f"user distance bounds out of order: {self.d_min_m} > {self.d_max_m}"
            )
        return self

    def model_post_init(self, __context: Any) -> None:
        self._rho_linear = db_to_linear(self.rho_db)
        self._sigma2_w = dbm_to_watts(self.sigma2_dbm)
        self._pmax_w = dbm_to_watts(self.pmax_dbm)

    @property
    def region_side_m(self) -> float:
        """Side length A of the square movement region."""
        return self.a_over_lambda * self.wavelength_m

    @property
    def half_width_m(self) -> float:
        """A / 2, the coordinate bound of the region."""
        return self.region_side_m / 2.0

    @property
    def min_distance_m(self) -> float:
        """Minimum inter-MA distance D."""
        return self.d_over_lambda * self.wavelength_m

    @property
    def rho_linear(self) -> float:
        return self._rho_linear

    @property
    def sigma2_w(self) -> float:
        return self._sigma2_w

    @property
    def pmax_w(self) -> float:
        return self._pmax_w


class FriErrorModel(BaseModel):
    """Imperfect field-response information.

    Attributes:
        mu: Maximum AoA error (rad); errors are U[-mu/2, mu/2]
        delta: Variance of the normalized path-response error
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mu: float = Field(default=0.0, ge=0)
    delta: float = Field(default=0.0, ge=0)


@dataclass(frozen=True, slots=True, eq=False)
class UserChannelParams:
    """Field-response information of one user.

    ``thetas``/``phis`` are elevation/azimuth AoAs (rad) and ``prv`` the
    complex path-response coefficients, all of length L.
    """

    distance_m: float
    thetas: RVector
    phis: RVector
    prv: CVector

    def __post_init__(self) -> None:
        lengths = {self.thetas.shape, self.phis.shape, self.prv.shape}
        if len(lengths) != 1 or self.thetas.ndim != 1 or self.thetas.size < 1:
            raise ValueError(
                "thetas, phis and prv must be 1-D arrays of equal non-zero length"
            )

    @property
    def num_paths(self) -> int:
        return int(self.thetas.size)


@dataclass(frozen=True, eq=False)
class Scenario(Sequence[UserChannelParams]):
    """All users of one realization, with stacked (K, L) views for vectorized math."""

    users: tuple[UserChannelParams, ...]
    thetas: RVector = field(init=False, repr=False)
    phis: RVector = field(init=False, repr=False)
    prv: CVector = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.users:
            raise ValueError("scenario needs at least one user")
        if len({user.num_paths for user in self.users}) != 1:
            raise ValueError("all users must have the same number of paths")
        object.__setattr__(self, "thetas", np.stack([u.thetas for u in self.users]))
        object.__setattr__(self, "phis", np.stack([u.phis for u in self.users]))
        object.__setattr__(self, "prv", np.stack([u.prv for u in self.users]))

    def __len__(self) -> int:
        return len(self.users)

    def __getitem__(self, index: int) -> UserChannelParams:  # type: ignore[override]
        return self.users[index]

    def __iter__(self) -> Iterator[UserChannelParams]:
        return iter(self.users)

    @property
    def distances_m(self) -> RVector:
        return np.array([user.distance_m for user in self.users])

    def fingerprint(self) -> str:
        """SHA-256 digest of the exact parameter bytes."""
        digest = hashlib.sha256()
        digest.update(self.distances_m.tobytes())
        for array in (self.thetas, self.phis, self.prv):
            digest.update(np.ascontiguousarray(array).tobytes())
        return digest.hexdigest()


def generate_scenario(cfg: ScenarioConfig, rng: RngStream) -> Scenario:
    """Draw one user realization.

    Each user k draws from its own sub-stream ``rng.child("user", k)``, so the
    first K users are shared by configurations that differ only in K.

    Args:
        cfg: Scenario configuration
        rng: Stream for this realization

    Returns:
        Scenario with d ~ U[dmin, dmax], AoAs ~ U[-pi/2, pi/2] and
        path responses g ~ CN(0, rho d^-alpha / L)
    """
    users = []
    for k in range(cfg.num_users):
        stream = rng.child("user", k)
        distance, stream = rng_draw_uniform(stream, cfg.d_min_m, cfg.d_max_m)
        thetas, stream = rng_draw_uniform(stream, -HALF_PI, HALF_PI, cfg.num_paths)
        phis, stream = rng_draw_uniform(stream, -HALF_PI, HALF_PI, cfg.num_paths)
        gain = cfg.rho_linear * float(distance) ** (-cfg.alpha) / cfg.num_paths
        prv, stream = rng_draw_cscg(stream, gain, cfg.num_paths)
        users.append(UserChannelParams(float(distance), thetas, phis, prv))
    return Scenario(tuple(users))


def perturb_fri(
    users: Sequence[UserChannelParams], err: FriErrorModel, rng: RngStream
) -> Scenario:
    """Produce estimated field-response information from the actual one.

    Estimated AoAs are ``theta - u`` with ``u ~ U[-mu/2, mu/2]`` (same for
    phi) and estimated path responses ``g - |g| e`` with ``e ~ CN(0, delta)``.
    A zero error component leaves the corresponding arrays untouched. The
    inputs are never modified.

    Args:
        users: Actual per-user parameters
        err: Error model
        rng: Stream for this perturbation

    Returns:
        Scenario of estimated parameters
    """
    estimated = []
    for k, user in enumerate(users):
        stream = rng.child("fri", k)
        thetas, phis, prv = user.thetas, user.phis, user.prv
        if err.mu > 0:
            half = err.mu / 2
            du, stream = rng_draw_uniform(stream, -half, half, user.num_paths)
            dv, stream = rng_draw_uniform(stream, -half, half, user.num_paths)
            thetas = thetas - du
            phis = phis - dv
        if err.delta > 0:
            e, stream = rng_draw_cscg(stream, err.delta, user.num_paths)
            prv = prv - np.abs(prv) * e
        estimated.append(UserChannelParams(user.distance_m, thetas, phis, prv))
    return Scenario(tuple(estimated))
