"""
Unit Tests for Power Control

Tests the equal-SINR linear system, the bisection search over target SINR
and power saturation.
"""

import numpy as np
import pytest

from src.exceptions import InfeasiblePowerError
from src.power import (
    bisection_power,
    build_D,
    saturate_power,
    solve_power_for_eta,
)
from src.receiver import build_A_b, mmse_combiner, sinr_report


SIGMA2 = 1e-11
PMAX = 0.01
EPSILON = 1e-3


def _feasible(a, b, eta, pmax):
    try:
        p = solve_power_for_eta(a, b, eta)
    except InfeasiblePowerError:
        return False
    return bool(np.max(p) <= pmax * (1 + 1e-12))


class TestBuildD:
    """Test the equal-SINR system matrix."""

    def test_entries(self):
        a = np.array([[2.0, 0.5], [0.25, 4.0]])
        d = build_D(a, 2.0)
        np.testing.assert_allclose(d, [[1.0, -0.5], [-0.25, 2.0]])

    def test_non_positive_eta_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            build_D(np.eye(2), 0.0)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            build_D(np.ones((2, 3)), 1.0)


class TestSolvePowerForEta:
    """Test the power solve at a fixed target."""

    def test_orthogonal_users(self):
        """Without interference p_k = eta b_k / A_kk."""
        p = solve_power_for_eta(np.diag([2.0, 4.0]), np.array([1.0, 1.0]), 0.5)
        np.testing.assert_allclose(p, [0.25, 0.125])

    def test_equal_sinr(self, random_channel):
        """Every user reaches exactly the target SINR."""
        h = random_channel(4, 3, seed=6)
        combiner = mmse_combiner(h, np.full(3, PMAX), SIGMA2)
        a, b = build_A_b(combiner, h, SIGMA2)
        p = solve_power_for_eta(a, b, 0.05)
        gamma = sinr_report(combiner, h, p, SIGMA2).gamma
        np.testing.assert_allclose(gamma, 0.05, rtol=1e-9)

    def test_zero_direct_gain(self):
        with pytest.raises(InfeasiblePowerError, match="zero direct gain"):
            solve_power_for_eta(np.array([[0.0, 1.0], [1.0, 1.0]]), np.ones(2), 1.0)

    def test_unreachable_target_gives_negative_power(self):
        """Strong interference makes large targets infeasible."""
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(InfeasiblePowerError) as exc_info:
            solve_power_for_eta(a, np.ones(2), 2.0)
        assert exc_info.value.eta == 2.0


class TestBisectionPower:
    """Test the bisection search."""

    def test_single_user_reaches_bound(self, random_channel):
        """With one user the bracket closes on pmax ||h||^2 / sigma^2."""
        h = random_channel(4, 1, seed=2)
        combiner = mmse_combiner(h, [PMAX], SIGMA2)
        result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
        assert result.eta_max == pytest.approx(PMAX * np.sum(np.abs(h) ** 2) / SIGMA2)
        assert result.eta == pytest.approx(result.eta_max, rel=1e-9)
        assert result.eta <= result.eta_max
        assert result.feasible

    def test_single_user_transmits_at_budget(self, random_channel):
        """One user gets the full budget with no midpoints evaluated."""
        for seed in range(10):
            h = random_channel(3, 1, seed=40 + seed)
            combiner = mmse_combiner(h, [PMAX], SIGMA2)
            result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
            np.testing.assert_array_equal(result.p, [PMAX])
            assert result.iterations == 0
            assert result.probes == ()
            gamma = sinr_report(combiner, h, result.p, SIGMA2).gamma
            assert gamma[0] == pytest.approx(result.eta, rel=1e-9)

    def test_matches_grid_search(self, random_channel):
        """Bisection target agrees with a dense feasibility scan."""
        for seed in range(10):
            h = random_channel(4, 3, seed=100 + seed)
            combiner = mmse_combiner(h, np.full(3, PMAX), SIGMA2)
            result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
            a, b = build_A_b(combiner, h, SIGMA2)
            grid = np.linspace(result.eta_max / 2000, result.eta_max, 2000)
            feasible = [eta for eta in grid if _feasible(a, b, eta, PMAX)]
            best = max(feasible, default=0.0)
            resolution = result.eta_max / 2000
            assert abs(result.eta - best) <= EPSILON + resolution

    def test_feasible_probes_equalize_sinr(self, random_channel):
        """At every feasible midpoint all users sit at the probed SINR."""
        for seed in range(20):
            h = random_channel(4, 3, seed=seed)
            combiner = mmse_combiner(h, np.full(3, PMAX), SIGMA2)
            result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
            for probe in result.probes:
                if not probe.feasible:
                    assert probe.p is None
                    continue
                gamma = sinr_report(combiner, h, probe.p, SIGMA2).gamma
                np.testing.assert_allclose(gamma, probe.eta, rtol=1e-6)

    def test_returned_power_in_box(self, random_channel):
        h = random_channel(5, 4, seed=9)
        combiner = mmse_combiner(h, np.full(4, PMAX), SIGMA2)
        result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
        assert np.all(result.p >= 0)
        assert np.all(result.p <= PMAX)
        assert result.iterations == len(result.probes)

    def test_zero_channel_returns_zero_power(self):
        h = np.zeros((2, 2), dtype=complex)
        h[0, 0] = 1e-5
        combiner = mmse_combiner(np.eye(2) * 1e-5, [PMAX, PMAX], SIGMA2)
        result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
        assert result.eta == 0.0
        assert result.iterations == 0
        np.testing.assert_array_equal(result.p, [0.0, 0.0])

    def test_invalid_epsilon(self, random_channel):
        h = random_channel(2, 1)
        combiner = mmse_combiner(h, [PMAX], SIGMA2)
        with pytest.raises(ValueError, match="epsilon"):
            bisection_power(h, combiner, PMAX, SIGMA2, 0.0)


class TestSaturatePower:
    """Test power saturation."""

    def test_scales_to_pmax(self):
        p = saturate_power(np.array([0.002, 0.004]), 0.01)
        np.testing.assert_allclose(p, [0.005, 0.01])

    def test_zero_vector_unchanged(self):
        np.testing.assert_array_equal(saturate_power(np.zeros(3), 0.01), np.zeros(3))

    def test_does_not_lower_min_sinr(self, random_channel):
        """A common scale-up under a fixed combiner never hurts any user."""
        h = random_channel(4, 3, seed=12)
        combiner = mmse_combiner(h, np.full(3, PMAX), SIGMA2)
        result = bisection_power(h, combiner, PMAX, SIGMA2, EPSILON)
        before = sinr_report(combiner, h, result.p, SIGMA2)
        after = sinr_report(combiner, h, saturate_power(result.p, PMAX), SIGMA2)
        assert np.all(after.gamma >= before.gamma * (1 - 1e-12))
        assert after.min_rate >= before.min_rate * (1 - 1e-12)
