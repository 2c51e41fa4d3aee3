"""Unit tests for Prometheus metrics."""

import numpy as np
from prometheus_client import REGISTRY, Counter, Histogram

from src.channel import Apv
from src.inner_loop import bcd_solve
from src.observability import metrics


def _sample(name, labels=None):
    return REGISTRY.get_sample_value(name, labels or {}) or 0.0


class TestMetricsDefinition:
    """Test that all metrics are properly defined."""

    def test_counters(self):
        for counter in (
            metrics.bcd_solves_total,
            metrics.singular_solves_total,
            metrics.pso_fitness_evaluations_total,
            metrics.rate_exceeds_penalty_total,
            metrics.trials_completed_total,
            metrics.results_written_total,
        ):
            assert isinstance(counter, Counter)

    def test_histograms(self):
        for histogram in (
            metrics.bcd_iterations,
            metrics.bisection_iterations,
            metrics.trial_duration_seconds,
        ):
            assert isinstance(histogram, Histogram)


class TestMetricsRecording:
    """Test that solvers record into the default registry."""

    def test_bcd_solve_counted(self, small_cfg, small_scenario):
        before = sum(
            _sample("bcd_solves_total", {"status": status})
            for status in ("converged", "capped", "unresolved")
        )
        bisections = _sample("bisection_iterations_count")

        apv = Apv(np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [-0.1, -0.1]]))
        bcd_solve(apv, small_scenario, small_cfg)

        after = sum(
            _sample("bcd_solves_total", {"status": status})
            for status in ("converged", "capped", "unresolved")
        )
        assert after == before + 1
        assert _sample("bisection_iterations_count") > bisections


class TestDumpMetrics:
    """Test the text-file exporter."""

    def test_dump_metrics_writes_registry(self, tmp_path):
        path = tmp_path / "metrics.prom"

        metrics.dump_metrics(path)

        text = path.read_text()
        assert "# TYPE bcd_solves_total counter" in text
        assert "# TYPE trial_duration_seconds histogram" in text
