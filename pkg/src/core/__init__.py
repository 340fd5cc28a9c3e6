"""
Core plumbing shared by experiments and the CLI.

- config: LabSettings (environment) and ExperimentConfig (one run)
- errors: LabError hierarchy
- models: SystemHandle, Verdict, ClauseResult and Report
- output: JSON report and CSV series writers
- parser: Key-value config file parsing
- service: ExperimentService orchestrating systems, caches and runners
  (import from src.core.service; it depends on src.spaces)
"""

from src.core.config import EXPERIMENT_IDS, ExperimentConfig, LabSettings
from src.core.errors import (
    ConfigError,
    IndistinguishableWordsError,
    LabError,
    PreconditionError,
    SeamViolationError,
    ShadowingError,
    SystemConfigError,
    WindowExhaustedError,
)
from src.core.models import ClauseResult, PointKind, Report, SystemHandle, Verdict
from src.core.output import jsonable, report_path, write_report, write_rows
from src.core.parser import ConfigFileParser, ParsedConfig, ParseError

__all__ = [
    "EXPERIMENT_IDS",
    "ClauseResult",
    "ConfigError",
    "ConfigFileParser",
    "ExperimentConfig",
    "IndistinguishableWordsError",
    "LabError",
    "LabSettings",
    "ParseError",
    "ParsedConfig",
    "PointKind",
    "PreconditionError",
    "Report",
    "SeamViolationError",
    "ShadowingError",
    "SystemConfigError",
    "Verdict",
    "WindowExhaustedError",
    "jsonable",
    "report_path",
    "write_report",
    "write_rows",
]
