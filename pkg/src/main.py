"""
dynlab - numerical laboratory for topological dynamics

Command-line entry point. Subcommands run one operation (ball, shadow,
horseshoe, entropy, chains) or a named experiment; each writes a JSON
report (plus CSV series with --format csv) and exits with the verdict code.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from src.core.config import EXPERIMENT_IDS, ExperimentConfig, LabSettings
from src.core.errors import ConfigError, LabError
from src.core.output import report_path, write_report
from src.core.parser import ConfigFileParser
from src.core.service import ExperimentService
from src.spaces import SYSTEM_IDS

# Load environment variables from .env file
load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler(sys.stdout)],
)
logger = logging.getLogger(__name__)

EXIT_ERROR = 1

COMMAND_HELP = {
    "ball": "Compute and classify a dynamical ball at a seeded center",
    "shadow": "Shadow one seeded pseudo-orbit",
    "horseshoe": "Find a link and certify a horseshoe",
    "entropy": "Estimate topological entropy of the whole system",
    "chains": "Chain graph, chain classes and nonwandering estimate",
}

# Flags shared by every subcommand; None means "not given"
FLAG_FIELDS = (
    "system",
    "matrix",
    "epsilon",
    "delta",
    "horizon",
    "depth",
    "seed",
    "grid_step",
    "samples",
    "n_max",
    "out",
    "format",
)


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser raising ConfigError instead of exiting on bad usage."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="Key-value config file (YAML or key = value)")
    parser.add_argument("--system", choices=SYSTEM_IDS, help="System id")
    parser.add_argument(
        "--matrix", type=int, nargs=4, metavar=("A", "B", "C", "D"), help="Cat matrix override"
    )
    parser.add_argument("--epsilon", type=float, help="Ball radius c / separation scale")
    parser.add_argument("--delta", type=float, help="Pseudo-orbit, chain or closeness scale")
    parser.add_argument("--horizon", type=int, help="Horizon N")
    parser.add_argument("--depth", type=int, help="Horseshoe word length m (at most 12)")
    parser.add_argument("--seed", type=int, help="Random seed (default 0)")
    parser.add_argument("--grid-step", dest="grid_step", type=float, help="Grid step 1/q")
    parser.add_argument("--samples", type=int, help="Number of sampled points or pseudo-orbits")
    parser.add_argument("--n-max", dest="n_max", type=int, help="Largest link block length")
    parser.add_argument("--out", type=Path, help="Report path (default <output dir>/<id>.json)")
    parser.add_argument("--format", choices=("json", "csv"), help="Report format (default json)")


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = LabArgumentParser(
        prog="dynlab",
        description="Numerical laboratory for dynamical balls, shadowing and horseshoes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in COMMAND_HELP.items():
        _add_run_flags(sub.add_parser(name, help=text, description=text))
    experiment = sub.add_parser("experiment", help="Run a named experiment")
    experiment.add_argument("id", choices=EXPERIMENT_IDS, help="Experiment id")
    _add_run_flags(experiment)
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the config file (if any) with command-line flags.

    Raises:
        ConfigError: If the file cannot be parsed or the merged values are invalid
    """
    file_values: dict[str, Any] = {}
    if args.config is not None:
        file_values = ConfigFileParser().parse_file(args.config).values
    flags = {name: getattr(args, name) for name in FLAG_FIELDS}
    flags["experiment"] = args.id if args.command == "experiment" else args.command
    return ExperimentConfig.build(file_values, flags)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return the process exit code."""
    try:
        args = parse_args(argv)
        config = build_config(args)
        settings = LabSettings()
        service = ExperimentService(settings=settings)
        if args.command == "experiment":
            report = service.run(config)
        else:
            report = service.run_command(args.command, config)
        path = report_path(report, config.out, settings.output_dir)
        written = write_report(report, path, config.format)
    except LabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR

    for c in report.clauses:
        logger.info(f"[{c.verdict.value}] criterion {c.criterion} {c.name}")
    logger.info(f"Verdict: {report.verdict.value} (report: {written[0]})")
    return report.verdict.exit_code


def run():
    """Entry point for the dynlab console script."""
    sys.exit(main())


if __name__ == "__main__":
    run()
