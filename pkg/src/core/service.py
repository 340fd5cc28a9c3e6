"""
Experiment service orchestrating systems, caches and runners.

This is the layer the CLI wraps: it builds systems from the registry,
memoizes expensive intermediate results (link scans, certificates,
witnessed balls, chain graphs) and dispatches experiment ids and
subcommands to their runners.
"""

import logging
import time
from collections.abc import Callable
from typing import Any

from src.cache import InMemoryCache, MemoCache
from src.core.config import EXPERIMENT_IDS, ExperimentConfig, LabSettings
from src.core.errors import ConfigError
from src.core.models import Report
from src.spaces.base import DynamicalSystem
from src.spaces.registry import build_system

logger = logging.getLogger(__name__)


class ExperimentService:
    """
    Main service for running experiments and subcommands.

    Orchestrates:
    - System construction from string ids
    - Memoization of link scans, certificates and witnesses
    - Dispatch to experiment runners and subcommands
    - Wall-time measurement

    Args:
        cache: Memo cache (default: InMemoryCache with 64 entries)
        settings: Environment settings (default: read from the environment)

    Example:
        service = ExperimentService()
        report = service.run(ExperimentConfig(experiment="horseshoe", depth=8))
        print(report.verdict)
    """

    def __init__(self, cache: MemoCache | None = None, settings: LabSettings | None = None):
        self._cache = cache or InMemoryCache(max_size=64)
        self.settings = settings or LabSettings()

    @property
    def cache(self) -> MemoCache:
        return self._cache

    def system(self, config: ExperimentConfig, default: str = "cat") -> DynamicalSystem:
        """Build (or fetch) the configured system, `default` when none is set."""
        name = config.system or default
        return self.build(name, config.matrix)

    def build(self, name: str, matrix: list[int] | None = None) -> DynamicalSystem:
        key = ("system", name, tuple(matrix) if matrix else None)
        return self._cache.get_or_compute(key, lambda: self._configured(build_system(name, matrix)))

    def _configured(self, system: DynamicalSystem) -> DynamicalSystem:
        system.float_tol = self.settings.float_tol
        return system

    def memo(self, key: tuple, compute: Callable[[], Any]) -> Any:
        """Memoize an intermediate result under key."""
        if self._cache.exists(key):
            logger.debug(f"Cache hit for {key[0]}")
        return self._cache.get_or_compute(key, compute)

    def _runners(self) -> dict[str, Callable[..., Report]]:
        from src.experiments import EXPERIMENTS

        return EXPERIMENTS

    def _commands(self) -> dict[str, Callable[..., Report]]:
        from src.experiments import COMMANDS

        return COMMANDS

    def run(self, config: ExperimentConfig) -> Report:
        """
        Run the experiment named by config.experiment.

        Raises:
            ConfigError: If the experiment id is unknown
        """
        runner = self._runners().get(config.experiment or "")
        if runner is None:
            raise ConfigError(
                f"Unknown experiment {config.experiment!r}; expected one of {', '.join(EXPERIMENT_IDS)}"
            )
        return self._timed(runner, config)

    def run_command(self, name: str, config: ExperimentConfig) -> Report:
        """
        Run a subcommand (ball, shadow, horseshoe, entropy, chains).

        Raises:
            ConfigError: If the subcommand is unknown
        """
        command = self._commands().get(name)
        if command is None:
            raise ConfigError(f"Unknown command {name!r}")
        return self._timed(command, config)

    def _timed(self, runner: Callable[..., Report], config: ExperimentConfig) -> Report:
        logger.info(f"Running {config.experiment} (system={config.system or 'default'}, seed={config.seed})")
        start = time.perf_counter()
        report = runner(config, self)
        report.wall_time_seconds = round(time.perf_counter() - start, 3)
        logger.info(
            f"{report.experiment}: {report.verdict.value} in {report.wall_time_seconds:.1f}s "
            f"({len(report.clauses)} clauses)"
        )
        logger.debug(f"Cache stats: {self._cache.stats()}")
        return report
