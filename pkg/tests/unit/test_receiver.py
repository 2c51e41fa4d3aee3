"""
Unit Tests for Receive Combining

Tests MMSE and zero-forcing combiners, the (A, b) gain decomposition and
SINR evaluation.
"""

import numpy as np
import pytest

from src.exceptions import DegenerateCombinerError, RankDeficientError
from src.receiver import (
    Combiner,
    CombinerKind,
    build_A_b,
    mmse_combiner,
    normalized_signal_interference,
    sinr_from_terms,
    sinr_report,
    split_sinr_terms,
    zf_combiner,
)
from src.receiver.combining import SINR_CAP


SIGMA2 = 1e-11
PMAX = 0.01


def _reference_sinr(w, h, p, sigma2):
    k_users = h.shape[1]
    gamma = np.empty(k_users)
    for k in range(k_users):
        gains = np.abs(w[:, k].conj() @ h) ** 2
        interference = sum(p[i] * gains[i] for i in range(k_users) if i != k)
        noise = np.linalg.norm(w[:, k]) ** 2 * sigma2
        gamma[k] = p[k] * gains[k] / (interference + noise)
    return gamma


class TestMmseCombiner:
    """Test the MMSE combiner."""

    def test_matches_closed_form(self, random_channel):
        """W = (H P H^H + sigma^2 I)^-1 H."""
        h = random_channel(4, 3, seed=1)
        p = np.array([0.01, 0.005, 0.002])
        combiner = mmse_combiner(h, p, SIGMA2)
        covariance = h @ np.diag(p) @ h.conj().T + SIGMA2 * np.eye(4)
        expected = np.linalg.solve(covariance, h)
        np.testing.assert_allclose(combiner.w, expected, rtol=1e-8)
        assert combiner.kind is CombinerKind.MMSE

    def test_mmse_beats_matched_filter(self, random_channel):
        """MMSE maximizes every user's SINR for fixed powers."""
        h = random_channel(4, 3, seed=2)
        p = np.full(3, PMAX)
        mmse = sinr_report(mmse_combiner(h, p, SIGMA2), h, p, SIGMA2)
        matched = sinr_report(Combiner(h, CombinerKind.MMSE), h, p, SIGMA2)
        assert np.all(mmse.gamma >= matched.gamma * (1 - 1e-9))

    def test_dominates_perturbed_combiners(self, random_channel):
        """No perturbation of the MMSE columns raises any user's SINR."""
        for seed in range(100):
            h = random_channel(4, 3, seed=seed)
            gen = np.random.default_rng(1000 + seed)
            p = gen.uniform(0.1, 1.0, 3) * PMAX
            mmse = mmse_combiner(h, p, SIGMA2)
            best = sinr_report(mmse, h, p, SIGMA2).gamma
            scale = np.linalg.norm(mmse.w, axis=0)
            for _ in range(100):
                noise = gen.standard_normal((2, 4, 3))
                step = gen.uniform(0.01, 1.0) * scale * (noise[0] + 1j * noise[1])
                other = Combiner(mmse.w + step, CombinerKind.MMSE)
                gamma = sinr_report(other, h, p, SIGMA2).gamma
                assert np.all(gamma <= best * (1 + 1e-9))

    def test_negative_power_rejected(self, random_channel):
        with pytest.raises(ValueError, match="non-negative"):
            mmse_combiner(random_channel(2, 2), [0.01, -0.01], SIGMA2)

    def test_non_positive_noise_rejected(self, random_channel):
        with pytest.raises(ValueError, match="noise"):
            mmse_combiner(random_channel(2, 2), [0.01, 0.01], 0.0)


class TestZfCombiner:
    """Test the zero-forcing combiner."""

    def test_nulls_interference(self, random_channel):
        """Normalized cross leakage is below 1e-8 on full-rank channels."""
        for seed in range(100):
            h = random_channel(6, 4, seed=seed)
            w = zf_combiner(h).w
            cross = np.abs(w.conj().T @ h)
            norms = np.outer(np.linalg.norm(w, axis=0), np.linalg.norm(h, axis=0))
            leakage = cross / norms
            np.fill_diagonal(leakage, 0.0)
            assert leakage.max() <= 1e-8

    def test_unit_diagonal(self, random_channel):
        h = random_channel(4, 4, seed=5)
        np.testing.assert_allclose(zf_combiner(h).w.conj().T @ h, np.eye(4), atol=1e-8)

    def test_rank_deficient_raises(self, random_channel):
        """Duplicate user channels make the Gram matrix singular."""
        h = random_channel(4, 2, seed=3)
        h[:, 1] = h[:, 0]
        with pytest.raises(RankDeficientError):
            zf_combiner(h)

    def test_more_users_than_antennas_raises(self, random_channel):
        with pytest.raises(RankDeficientError):
            zf_combiner(random_channel(2, 3, seed=4))


class TestGainDecomposition:
    """Test A and b for arbitrary combiners."""

    def test_entries(self):
        w = np.array([[1.0, 0.0], [1j, 2.0]])
        h = np.array([[1.0, 1.0], [0.0, 1.0]])
        a, b = build_A_b(Combiner(w, CombinerKind.MMSE), h, 0.5)
        # a[k, i] = |w_k^H h_i|^2
        np.testing.assert_allclose(a, [[1.0, 2.0], [0.0, 4.0]])
        np.testing.assert_allclose(b, [1.0, 2.0])

    def test_zero_column_raises(self):
        w = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(DegenerateCombinerError) as exc_info:
            build_A_b(Combiner(w, CombinerKind.ZF), np.eye(2), 1.0)
        assert exc_info.value.user_index == 1

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            build_A_b(Combiner(np.eye(2), CombinerKind.ZF), np.ones((3, 2)), 1.0)

    def test_split_terms(self):
        a = np.array([[2.0, 1.0], [3.0, 4.0]])
        signal, interference = split_sinr_terms(a, np.array([1.0, 2.0]))
        np.testing.assert_allclose(signal, [2.0, 8.0])
        np.testing.assert_allclose(interference, [2.0, 3.0])


class TestSinr:
    """Test SINR and rate evaluation."""

    def test_matches_reference(self, random_channel):
        h = random_channel(5, 3, seed=8)
        p = np.array([0.01, 0.003, 0.007])
        combiner = mmse_combiner(h, p, SIGMA2)
        report = sinr_report(combiner, h, p, SIGMA2)
        expected = _reference_sinr(combiner.w, h, p, SIGMA2)
        np.testing.assert_allclose(report.gamma, expected, rtol=1e-9)
        np.testing.assert_allclose(report.rates, np.log2(1 + expected), rtol=1e-9)
        assert report.min_rate == pytest.approx(np.log2(1 + expected.min()))

    def test_invariant_to_column_scaling(self, random_channel):
        """Scaling w_k by any non-zero complex factor leaves SINR_k unchanged."""
        gen = np.random.default_rng(21)
        for seed in range(20):
            h = random_channel(4, 3, seed=seed)
            p = np.full(3, PMAX)
            combiner = mmse_combiner(h, p, SIGMA2)
            factors = gen.uniform(0.1, 10.0, 3) * np.exp(1j * gen.uniform(0, 6.3, 3))
            scaled = Combiner(combiner.w * factors, CombinerKind.MMSE)
            np.testing.assert_allclose(
                sinr_report(scaled, h, p, SIGMA2).gamma,
                sinr_report(combiner, h, p, SIGMA2).gamma,
                rtol=1e-9,
            )

    def test_zero_combiner_gives_zero_sinr(self):
        """A zero column yields SINR 0 for that user instead of raising."""
        w = np.array([[1.0, 0.0], [0.0, 0.0]])
        report = sinr_report(Combiner(w, CombinerKind.ZF), np.eye(2), [1.0, 1.0], 1.0)
        assert report.gamma[1] == 0.0
        assert report.min_rate == 0.0

    def test_guarded_denominator(self):
        gamma = sinr_from_terms(
            np.array([1.0, 0.0, 2.0]), np.zeros(3), np.array([0.0, 0.0, 1.0])
        )
        np.testing.assert_allclose(gamma, [SINR_CAP, 0.0, 2.0])

    def test_wrong_power_shape(self, random_channel):
        h = random_channel(3, 2)
        combiner = mmse_combiner(h, [0.01, 0.01], SIGMA2)
        with pytest.raises(ValueError, match="shape"):
            sinr_report(combiner, h, [0.01], SIGMA2)

    def test_normalized_signal_interference(self):
        """Means over users of p_k A_kk / b_k and interference / b_k."""
        w = np.eye(2)
        h = np.array([[1.0, 1.0], [0.0, 2.0]])
        signal, interference = normalized_signal_interference(
            Combiner(w, CombinerKind.MMSE), h, [1.0, 1.0], 0.5
        )
        # a = [[1, 1], [0, 4]], b = [0.5, 0.5]
        assert signal == pytest.approx((2.0 + 8.0) / 2)
        assert interference == pytest.approx((2.0 + 0.0) / 2)
