"""CSV emitters for runs and sweeps.

Numbers are written with six significant digits so files are stable across
platforms and byte-identical on re-emission.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Any, Iterable

from .engine import SERIES_FIELDS, RunResult
from .experiments import SweepTable
from .metrics import METRIC_NAMES

SERIES_HEADER = ("step",) + SERIES_FIELDS
FINAL_HEADER = METRIC_NAMES
SWEEP_HEADER = ("axis1", "axis2", "metric", "mean", "stddev")


def fmt(value: Any) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.6g}"


def _write(path: Path, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_run_csv(result: RunResult, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``series.csv`` and ``final.csv`` into ``out_dir``."""
    out_dir = Path(out_dir)
    rows = (
        [int(s)] + [result.series[name][i] for name in SERIES_FIELDS]
        for i, s in enumerate(result.steps)
    )
    series = _write(out_dir / "series.csv", SERIES_HEADER, rows)
    m = result.metrics
    final = _write(out_dir / "final.csv", FINAL_HEADER, [[getattr(m, k) for k in FINAL_HEADER]])
    return series, final


def emit_sweep_csv(table: SweepTable, out_dir: str | Path) -> Path:
    """Write ``sweep.csv``: one row per (cell, metric)."""
    return _write(Path(out_dir) / "sweep.csv", SWEEP_HEADER, table.rows())


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
