"""Tests for the experiment service and runners."""

import json

import pytest

from src.cache import InMemoryCache
from src.core.config import EXPERIMENT_IDS, ExperimentConfig, LabSettings
from src.core.errors import ConfigError
from src.core.models import ClauseResult, Report, Verdict
from src.core.service import ExperimentService
from src.experiments import COMMANDS, EXPERIMENTS


@pytest.fixture
def service():
    return ExperimentService(cache=InMemoryCache(max_size=16))


class TestVerdict:
    """Tests for verdict combination and exit codes."""

    def test_exit_codes(self):
        """Test the exit code of each verdict."""
        assert Verdict.PASS.exit_code == 0
        assert Verdict.FAIL.exit_code == 2
        assert Verdict.INCONCLUSIVE.exit_code == 3

    @pytest.mark.parametrize(
        "verdicts,expected",
        [
            ([Verdict.PASS, Verdict.PASS], Verdict.PASS),
            ([Verdict.PASS, Verdict.INCONCLUSIVE], Verdict.INCONCLUSIVE),
            ([Verdict.INCONCLUSIVE, Verdict.FAIL], Verdict.FAIL),
        ],
    )
    def test_combine(self, verdicts, expected):
        """Test that a failure dominates and inconclusive beats pass."""
        assert Verdict.combine(verdicts) == expected

    def test_report_tracks_clauses(self):
        """Test that adding clauses updates the overall verdict."""
        report = Report(experiment="demo")
        report.add_clause(ClauseResult(criterion=1, name="a", verdict=Verdict.PASS))
        assert report.verdict == Verdict.PASS

        report.add_clause(ClauseResult(criterion=2, name="b", verdict=Verdict.FAIL))
        assert report.verdict == Verdict.FAIL
        assert "wall_time_seconds" not in report.payload()


class TestRegistry:
    """Tests for the experiment and command tables."""

    def test_every_experiment_id_has_a_runner(self):
        """Test that the config ids and the runner table agree."""
        assert set(EXPERIMENTS) == set(EXPERIMENT_IDS)

    def test_commands(self):
        """Test the subcommand table."""
        assert set(COMMANDS) == {"ball", "shadow", "horseshoe", "entropy", "chains"}


class TestExperimentService:
    """Tests for ExperimentService dispatch and memoization."""

    def test_unknown_experiment(self, service):
        """Test that an unknown id raises ConfigError."""
        with pytest.raises(ConfigError, match="Unknown experiment"):
            service.run(ExperimentConfig(experiment="theorem-z"))

    def test_unknown_command(self, service):
        """Test that an unknown subcommand raises ConfigError."""
        with pytest.raises(ConfigError, match="Unknown command"):
            service.run_command("plot", ExperimentConfig())

    def test_systems_are_memoized(self, service):
        """Test that a system is built once per matrix."""
        first = service.build("cat")

        assert service.build("cat") is first
        assert service.build("cat", [3, 2, 1, 1]) is not first

    def test_float_tol_from_settings(self):
        """Test that built systems take the configured tolerance."""
        service = ExperimentService(settings=LabSettings(float_tol=1e-7))

        assert service.build("sphere").float_tol == 1e-7

    def test_memo_computes_once(self, service):
        """Test memoized intermediates."""
        calls = []
        service.memo(("k",), lambda: calls.append(1))
        service.memo(("k",), lambda: calls.append(1))

        assert len(calls) == 1

    def test_shadowing_records_wall_time(self, service):
        """Test a small shadowing run through the service."""
        config = ExperimentConfig(experiment="shadowing", samples=2, horizon=200)
        report = service.run(config)

        assert report.verdict == Verdict.PASS
        assert report.wall_time_seconds >= 0.0
        assert report.results["worst_ratio"] <= 5**0.5 * (1 + 1e-6)
        assert len(report.series["orbits"]) == 2

    def test_example1_shadowing_adds_ideal_gap(self, service):
        """Test shadowing on Example 1 against C·delta plus the ideal gap."""
        config = ExperimentConfig(
            experiment="shadowing", system="example1", samples=3, horizon=100, delta=1e-3
        )

        assert service.run(config).verdict == Verdict.PASS

    def test_shift_shadowing_is_inconclusive(self, service):
        """Test that systems without a shadow constant are inconclusive."""
        config = ExperimentConfig(
            experiment="shadowing", system="shift2", samples=2, horizon=40, delta=1e-2
        )
        report = service.run(config)

        assert report.verdict == Verdict.INCONCLUSIVE
        assert report.clauses[1].verdict == Verdict.INCONCLUSIVE

    def test_asymptotic_on_cat(self, service):
        """Test that asymptotic balls of the cat map are trivial."""
        config = ExperimentConfig(experiment="asymptotic", system="cat", samples=3)
        report = service.run(config)

        assert report.verdict == Verdict.PASS
        assert report.results["cat"]["sizes"] == [1, 1, 1]

    def test_theorem_b_uses_detected_radius(self, service):
        """Test that the entropy check runs at half the detected expansivity radius."""
        config = ExperimentConfig(
            experiment="theorem-b", system="cat", samples=2, horizon=40, epsilon=0.05
        )
        report = service.run(config)
        detected = report.results["expansivity_radius"]
        entropy = next(c for c in report.clauses if c.name == "entropy-expansive-at-half-c")

        assert detected["ladder"] == [0.00625, 0.0125, 0.025, 0.05]
        assert detected["radius"] == 0.05
        assert entropy.measured["radius"] == detected["radius"] / 2
        assert entropy.measured["detected_radius"] == 0.05
        assert report.verdict == Verdict.PASS

    def test_example1_chains(self, service):
        """Test the chains subcommand on Example 1."""
        config = ExperimentConfig(experiment="chains", system="example1", delta=0.1, horizon=50)
        report = service.run_command("chains", config)

        assert report.results["class_counts"] == {"0.2": 5, "0.1": 10, "0.05": 20}
        assert report.clauses[0].name == "nonwandering-covers-cloud"


class TestReproducibility:
    """Tests that reruns with the same seed give the same report."""

    @pytest.mark.parametrize(
        "command,config",
        [
            (None, ExperimentConfig(experiment="shadowing", samples=2, horizon=200, seed=7)),
            (None, ExperimentConfig(experiment="asymptotic", system="cat", samples=3, seed=7)),
            (
                None,
                ExperimentConfig(
                    experiment="theorem-b", system="cat", samples=2, horizon=40, epsilon=0.05
                ),
            ),
            ("ball", ExperimentConfig(experiment="ball", system="cat", horizon=30, seed=7)),
            (
                "chains",
                ExperimentConfig(experiment="chains", system="example1", delta=0.1, horizon=50),
            ),
        ],
        ids=["shadowing", "asymptotic", "theorem-b", "ball", "chains"],
    )
    def test_same_seed_same_payload(self, command, config):
        """Test that two fresh services produce identical payloads."""
        payloads = []
        for _ in range(2):
            service = ExperimentService(cache=InMemoryCache(max_size=16))
            report = (
                service.run(config) if command is None else service.run_command(command, config)
            )
            payloads.append(json.dumps(report.payload(), sort_keys=True))

        assert payloads[0] == payloads[1]


@pytest.mark.slow
class TestAcceptanceRuns:
    """Default-parameter experiment runs."""

    def test_entropy_of_cat(self, service):
        """Test the cat map entropy against log of its unstable eigenvalue."""
        report = service.run(ExperimentConfig(experiment="entropy"))

        assert report.verdict == Verdict.PASS

    def test_horseshoe_on_sphere(self, service):
        """Test link detection and a depth 4 certificate on the sphere."""
        report = service.run(ExperimentConfig(experiment="horseshoe", depth=4))

        assert report.verdict == Verdict.PASS
        assert report.results["certificate"]["points"] == 16

    def test_example1_suite(self, service):
        """Test the full Example 1 suite."""
        report = service.run(ExperimentConfig(experiment="example1", samples=20000))

        assert report.verdict == Verdict.PASS
