"""
Report emission: JSON reports and plot-ready CSV series.
"""

import csv
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.core.models import Report

logger = logging.getLogger(__name__)


def jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars, arrays and tuples to JSON-safe values."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (list, tuple, set)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def report_path(report: Report, out: Path | None, output_dir: Path) -> Path:
    """Explicit --out path, else <output_dir>/<experiment>.json."""
    if out is not None:
        return Path(out)
    return Path(output_dir) / f"{report.experiment}.json"


def write_rows(path: Path, rows: Sequence[Mapping[str, Any]]) -> Path:
    """Write rows as CSV with the union of their keys as header, in first-seen order."""
    header: list[str] = []
    for row in rows:
        header += [k for k in row if k not in header]
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=header, restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: jsonable(v) for k, v in row.items()})
    return path


def write_report(report: Report, path: Path, fmt: str = "json") -> list[Path]:
    """
    Write the JSON report, and with fmt="csv" one CSV file per series.

    CSV files are named <report stem>_<series>.csv next to the report.

    Returns:
        Paths written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    written = [path]
    if fmt == "csv":
        for name, rows in sorted(report.series.items()):
            if rows:
                written.append(write_rows(path.with_name(f"{path.stem}_{name}.csv"), rows))
    logger.info(f"Wrote {', '.join(str(p) for p in written)}")
    return written
