import sys
from pathlib import Path

import numpy as np
import pytest


# Add project root to sys.path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.channel import ScenarioConfig, generate_scenario
from src.inner_loop import SolverConfig
from src.numerics import RngStream
from src.pso import PsoParams


@pytest.fixture
def small_cfg() -> ScenarioConfig:
    """Four antennas, three users, four paths; otherwise full-scale physics."""
    return ScenarioConfig(M=4, K=3, L=4)


@pytest.fixture
def small_scenario(small_cfg):
    return generate_scenario(small_cfg, RngStream(7).child("scenario", 0))


@pytest.fixture
def tiny_pso() -> PsoParams:
    return PsoParams(N=6, T=4)


@pytest.fixture
def fast_solver() -> SolverConfig:
    return SolverConfig(max_iterations=50)


@pytest.fixture
def random_channel():
    """Factory for random full-rank complex channels scaled like real ones."""

    def make(num_antennas: int, num_users: int, seed: int = 0, scale: float = 1e-5):
        gen = np.random.default_rng(seed)
        parts = gen.standard_normal((2, num_antennas, num_users))
        return scale * (parts[0] + 1j * parts[1]) / np.sqrt(2.0)

    return make
