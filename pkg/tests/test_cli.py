"""Tests for the dynlab command line."""

import json

import pytest

from src.core.errors import ConfigError
from src.main import build_config, main, parse_args


class TestParseArgs:
    """Tests for argument parsing and config layering."""

    def test_unknown_experiment_is_usage_error(self):
        """Test that a bad experiment id raises ConfigError."""
        with pytest.raises(ConfigError, match="invalid choice"):
            parse_args(["experiment", "nope"])

    def test_matrix_takes_four_integers(self):
        """Test the --matrix flag."""
        args = parse_args(["entropy", "--matrix", "3", "2", "1", "1"])

        assert args.matrix == [3, 2, 1, 1]

    def test_flags_override_config_file(self, tmp_path):
        """Test that command-line flags win over the config file."""
        path = tmp_path / "chains.yaml"
        path.write_text("system: example1\ndelta: 0.2\nseed: 4\n", encoding="utf-8")
        config = build_config(parse_args(["chains", "--config", str(path), "--delta", "0.1"]))

        assert config.system == "example1"
        assert config.delta == 0.1
        assert config.seed == 4
        assert config.experiment == "chains"

    def test_experiment_id_becomes_name(self):
        """Test that the experiment id names the run."""
        config = build_config(parse_args(["experiment", "asymptotic", "--samples", "2"]))

        assert config.experiment == "asymptotic"
        assert config.samples == 2


class TestMain:
    """Tests for main() exit codes and report files."""

    def test_usage_error_exits_one(self):
        """Test that bad usage returns 1."""
        assert main(["experiment", "nope"]) == 1
        assert main(["ball", "--depth", "many"]) == 1

    def test_invalid_config_exits_one(self):
        """Test that a config failing validation returns 1."""
        assert main(["ball", "--depth", "13"]) == 1

    def test_wrong_system_exits_one(self, tmp_path):
        """Test that the Example 1 suite refuses another system."""
        out = tmp_path / "e1.json"

        assert main(["experiment", "example1", "--system", "cat", "--out", str(out)]) == 1
        assert not out.exists()

    def test_ball_passes(self, tmp_path):
        """Test a small ball run end to end."""
        out = tmp_path / "ball.json"
        code = main(
            ["ball", "--system", "cat", "--epsilon", "0.05", "--horizon", "30", "--out", str(out)]
        )
        report = json.loads(out.read_text(encoding="utf-8"))

        assert code == 0
        assert report["experiment"] == "ball"
        assert report["verdict"] == "pass"
        assert report["results"]["ball"]["classification"] == "trivial"
        assert report["config"]["epsilon"] == 0.05

    def test_shadow_writes_csv(self, tmp_path):
        """Test that --format csv adds one file per series."""
        out = tmp_path / "shadow.json"
        code = main(
            ["shadow", "--horizon", "100", "--delta", "1e-4", "--out", str(out), "--format", "csv"]
        )

        assert code == 0
        assert (tmp_path / "shadow_orbits.csv").exists()
        assert (tmp_path / "shadow_tightening.csv").exists()
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["config"]["samples"] == 1
        assert [c["name"] for c in report["clauses"]] == [
            "pseudo-orbits-valid",
            "shadow-within-bound",
            "shadow-orbits-genuine",
        ]

    def test_inconclusive_exits_three(self, tmp_path):
        """Test that an entropy run without an oracle is inconclusive."""
        out = tmp_path / "entropy.json"
        code = main(["entropy", "--system", "cantor-id", "--horizon", "4", "--out", str(out)])

        assert code == 3
        assert json.loads(out.read_text(encoding="utf-8"))["verdict"] == "inconclusive"

    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        """Test that DYNLAB_OUTPUT_DIR sets the default report directory."""
        monkeypatch.setenv("DYNLAB_OUTPUT_DIR", str(tmp_path))

        assert main(["ball", "--system", "cat", "--horizon", "20"]) == 0
        assert (tmp_path / "ball.json").exists()
