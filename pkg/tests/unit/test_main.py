"""
Unit Tests for the Command-Line Interface

Tests argument parsing, override construction, every subcommand on a tiny
configuration and the exit-code mapping.
"""

import csv
import json

import pytest

from src.main import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    _overrides,
    build_parser,
    main,
)


TINY = """
[scenario]
M = 3
K = 2
L = 2

[pso]
N = 3
T = 2

[experiment]
name = "tiny"
schemes = ["MA", "FPA"]
trials = 2
seed = 11
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY)
    return path


def _rows(path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


class TestParser:
    """Test argument parsing."""

    def test_run_defaults(self):
        args = build_parser().parse_args(["run"])
        assert args.profile == "desk"
        assert args.format == "csv"
        assert args.seed is None

    def test_table1_profile(self):
        args = build_parser().parse_args(["run", "--profile", "table1"])
        assert args.profile == "table1"

    def test_workers_on_single_run_commands(self):
        args = build_parser().parse_args(["convergence", "--workers", "2"])
        assert args.workers == 2

    def test_schemes_normalized(self):
        args = build_parser().parse_args(["run", "--schemes", "ma, fpa"])
        assert args.schemes == ["MA", "FPA"]

    def test_unknown_scheme(self):
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["run", "--schemes", "MA,ULA"])
        assert exc_info.value.code == 2

    def test_hex_seed(self):
        args = build_parser().parse_args(["run", "--seed", "0x10"])
        assert args.seed == 16

    def test_seed_out_of_range(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "--seed", str(1 << 64)])

    def test_sweep_needs_family(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sweep"])

    def test_fri_error_choices(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["fri", "--error", "gamma"])

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestOverrides:
    """Test flag-to-document translation."""

    def test_no_flags(self):
        assert _overrides(build_parser().parse_args(["run"])) == {}

    def test_experiment_flags(self):
        args = build_parser().parse_args(
            ["run", "--seed", "5", "--trials", "3", "--timing"]
        )
        assert _overrides(args) == {
            "experiment": {"seed": 5, "trials": 3, "timing": True}
        }

    def test_sweep_uses_preset(self):
        args = build_parser().parse_args(["sweep", "--family", "K"])
        sweep = _overrides(args)["experiment"]["sweep"]
        assert sweep == {"param": "K", "values": [2, 3, 4]}

    def test_sweep_explicit_values(self):
        args = build_parser().parse_args(
            ["sweep", "--family", "pmax_dbm", "--values", "0,15"]
        )
        assert _overrides(args)["experiment"]["sweep"]["values"] == [0.0, 15.0]

    def test_fri_zeroes_error_model(self):
        args = build_parser().parse_args(["fri", "--error", "delta"])
        overrides = _overrides(args)
        assert overrides["fri"] == {"mu": 0.0, "delta": 0.0}
        assert overrides["experiment"]["sweep"]["param"] == "delta"


class TestCommands:
    """Test subcommands end to end on a tiny configuration."""

    def test_run(self, tiny_config, tmp_path):
        out = tmp_path / "run.csv"
        code = main(["run", "--config", str(tiny_config), "--out", str(out)])
        assert code == EXIT_OK
        rows = _rows(out)
        assert len(rows) == 4
        assert [row["scheme"] for row in rows] == ["MA", "MA", "FPA", "FPA"]
        assert all(row["wall_ms"] == "0" for row in rows)
        assert (tmp_path / "run.summary.csv").exists()

    def test_run_json(self, tiny_config, tmp_path):
        out = tmp_path / "run.json"
        argv = ["run", "--config", str(tiny_config), "--out", str(out)]
        assert main([*argv, "--format", "json", "--schemes", "FPA"]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert len(payload) == 2
        assert {entry["scheme"] for entry in payload} == {"FPA"}

    def test_sweep(self, tiny_config, tmp_path):
        out = tmp_path / "sweep.csv"
        argv = ["sweep", "--config", str(tiny_config), "--out", str(out)]
        code = main([*argv, "--family", "L", "--values", "1,2", "--schemes", "FPA"])
        assert code == EXIT_OK
        rows = _rows(out)
        assert [row["sweep_value"] for row in rows] == ["1", "1", "2", "2"]
        assert {row["sweep_param"] for row in rows} == {"L"}

    def test_fri(self, tiny_config, tmp_path):
        out = tmp_path / "fri.csv"
        argv = ["fri", "--config", str(tiny_config), "--out", str(out)]
        code = main([*argv, "--error", "mu", "--values", "0,0.1", "--trials", "1"])
        assert code == EXIT_OK
        rows = _rows(out)
        assert len(rows) == 4
        assert {row["sweep_param"] for row in rows} == {"mu"}

    def test_convergence(self, tiny_config, tmp_path):
        out = tmp_path / "conv.csv"
        code = main(["convergence", "--config", str(tiny_config), "--out", str(out)])
        assert code == EXIT_OK
        rows = _rows(out)
        # initial swarm plus T iterations
        assert [row["iteration"] for row in rows] == ["0", "1", "2"]

    def test_heatmap(self, tiny_config, tmp_path):
        out = tmp_path / "map.csv"
        argv = ["heatmap", "--config", str(tiny_config), "--out", str(out)]
        assert main([*argv, "--points", "4"]) == EXIT_OK
        assert len(_rows(out)) == 2 * 4 * 4
        assert (tmp_path / "map.users.csv").exists()
        assert (tmp_path / "map.layouts.csv").exists()

    def test_metrics_textfile(self, tiny_config, tmp_path):
        out = tmp_path / "run.csv"
        metrics_out = tmp_path / "metrics.prom"
        argv = ["run", "--config", str(tiny_config), "--out", str(out)]
        assert main([*argv, "--metrics-out", str(metrics_out)]) == EXIT_OK
        assert "trials_completed_total" in metrics_out.read_text()


class TestExitCodes:
    """Test error mapping."""

    def test_invalid_configuration(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[scenario]\nM = 2\nK = 3\n")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "absent.toml")]) == EXIT_CONFIG

    def test_unwritable_output(self, tiny_config, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        argv = ["run", "--config", str(tiny_config), "--schemes", "FPA"]
        assert main([*argv, "--out", str(blocker / "out.csv")]) == EXIT_IO
