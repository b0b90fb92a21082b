"""
Report and plot-data writers: UTF-8, LF line endings, full-precision floats
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .models import RunReport

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


@dataclass(frozen=True)
class Table:
    """Column-oriented CSV payload."""

    header: Sequence[str]
    columns: Sequence[np.ndarray]

    def __post_init__(self):
        if len(self.header) != len(self.columns):
            raise ValueError("Table header and columns differ in length")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"Table columns have different lengths {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0]) if self.columns else 0


def format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path: Path, table: Table) -> Path:
    """
    Write one table.

    Raises:
        OSError: with the offending path in the message
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(table.header)
            for row in zip(*table.columns):
                writer.writerow([format_value(v) for v in row])
    except OSError as e:
        raise OSError(f"Failed to write {path}: {e}") from e
    logger.info(f"Wrote {table.n_rows} rows to {path}")
    return path


def emit_plot_data(report: RunReport, tables: dict[str, Table], out_dir: Path) -> list[Path]:
    """Write every table as <name>.csv and record the files on the report."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"Failed to create output directory {out_dir}: {e}") from e
    written = [write_csv(out_dir / f"{name}.csv", table) for name, table in sorted(tables.items())]
    report.artifacts.extend(p.name for p in written)
    return written


def write_report(report: RunReport, out_dir: Path) -> Path:
    path = Path(out_dir) / REPORT_NAME
    try:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise OSError(f"Failed to write {path}: {e}") from e
    logger.info(f"Report written to {path}")
    return path


def distribution_table(points: np.ndarray, p: np.ndarray) -> Table:
    """Full matrix in row-major order: columns x, x_prime, p."""
    n = points.size
    return Table(
        header=("x", "x_prime", "p"),
        columns=(np.repeat(points, n), np.tile(points, n), p.ravel()),
    )


def trajectory_table(times: np.ndarray, positions: np.ndarray) -> Table:
    """One row per sample time: columns t, x_0, x_1, ... (one per member)."""
    times = np.asarray(times)
    if np.any(np.diff(times) <= 0):
        raise ValueError("Trajectory sample times must be strictly increasing")
    positions = np.atleast_2d(positions)
    header = ("t", *(f"x_{m}" for m in range(positions.shape[0])))
    return Table(header=header, columns=(times, *positions))
