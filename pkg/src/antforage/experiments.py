"""Multi-seed parameter sweeps and the named spotlight configurations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .config import ConfigError, SimConfig
from .engine import run
from .metrics import METRIC_NAMES, Metrics

ATTACK_M = (0.0, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0)
ATTACK_FD = (0.0039, 0.0078, 0.0156, 0.0313, 0.0625, 0.125, 0.25, 0.5)
DEFENSE_RHO_MAX = (50.0, 100.0, 250.0, 500.0, 1000.0)
DEFENSE_T_P = (1.0, 2.0, 5.0, 10.0, 50.0, 100.0)


def spotlight_configs(base: SimConfig | None = None) -> dict[str, SimConfig]:
    """The four highlighted attack settings, keyed ``alpha`` .. ``delta``."""
    base = SimConfig() if base is None else base
    return {
        "alpha": base.with_(f_d=0.0313, m=1.0),
        "beta": base.with_(f_d=0.5, m=0.0),
        "gamma": base.with_(f_d=0.0039, m=1000.0),
        "delta": base.with_(f_d=0.125, m=5.0),
    }


@dataclass(frozen=True)
class SweepSpec:
    """A two-axis grid of runs.

    ``axis1`` and ``axis2`` name :class:`SimConfig` fields; every cell runs
    ``runs_per_cell`` seeds ``seed_base, seed_base + 1, ...`` on top of
    ``base``.
    """

    axis1_name: str
    axis1: tuple[float, ...]
    axis2_name: str
    axis2: tuple[float, ...]
    base: SimConfig = field(default_factory=SimConfig)
    runs_per_cell: int = 20
    seed_base: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "axis1", tuple(self.axis1))
        object.__setattr__(self, "axis2", tuple(self.axis2))
        if not self.axis1 or not self.axis2:
            raise ConfigError("sweep axes must be non-empty")
        if self.runs_per_cell < 1:
            raise ConfigError("runs_per_cell must be >= 1")
        names = set(self.base.to_dict())
        for name in (self.axis1_name, self.axis2_name):
            if name not in names:
                raise ConfigError(f"unknown sweep axis: {name!r}")

    @property
    def cells(self) -> list[tuple[Any, Any]]:
        return list(product(self.axis1, self.axis2))

    def cell_config(self, a1: Any, a2: Any, run_index: int) -> SimConfig:
        return self.base.with_(
            **{self.axis1_name: a1, self.axis2_name: a2, "seed": self.seed_base + run_index}
        )

    def jobs(self) -> list[SimConfig]:
        return [self.cell_config(a1, a2, i) for a1, a2 in self.cells for i in range(self.runs_per_cell)]


def attack_sweep(base: SimConfig | None = None, runs_per_cell: int = 20, seed_base: int = 0) -> SweepSpec:
    return SweepSpec("m", ATTACK_M, "f_d", ATTACK_FD, base or SimConfig(), runs_per_cell, seed_base)


def defense_sweep(base: SimConfig | None = None, runs_per_cell: int = 20, seed_base: int = 0) -> SweepSpec:
    """Patience grid on top of configuration alpha with the defense switched on."""
    if base is None:
        base = spotlight_configs()["alpha"]
    base = base.with_(defense_enabled=True)
    return SweepSpec("rho_max", DEFENSE_RHO_MAX, "t_p", DEFENSE_T_P, base, runs_per_cell, seed_base)


@dataclass(frozen=True)
class CellStats:
    mean: Metrics
    std: Metrics
    runs: tuple[Metrics, ...]


@dataclass
class SweepTable:
    spec: SweepSpec
    cells: dict[tuple[Any, Any], CellStats]

    def __len__(self) -> int:
        return len(self.cells)

    def mean(self, metric: str) -> np.ndarray:
        """``(len(axis1), len(axis2))`` array of cell means for one metric."""
        return self._grid(metric, "mean")

    def std(self, metric: str) -> np.ndarray:
        return self._grid(metric, "std")

    def _grid(self, metric: str, which: str) -> np.ndarray:
        out = np.empty((len(self.spec.axis1), len(self.spec.axis2)))
        for i, a1 in enumerate(self.spec.axis1):
            for j, a2 in enumerate(self.spec.axis2):
                out[i, j] = getattr(getattr(self.cells[(a1, a2)], which), metric)
        return out

    def rows(self) -> list[tuple[Any, Any, str, float, float]]:
        """``(axis1, axis2, metric, mean, std)`` sorted by axis values then metric."""
        out = []
        for (a1, a2), cell in self.cells.items():
            for name in METRIC_NAMES:
                out.append((a1, a2, name, getattr(cell.mean, name), getattr(cell.std, name)))
        out.sort(key=lambda r: (r[0], r[1], r[2]))
        return out


def summarize(runs: Sequence[Metrics]) -> CellStats:
    """Mean and population standard deviation of each metric."""
    values = np.array([[getattr(m, k) for k in METRIC_NAMES] for m in runs], dtype=np.float64)
    return CellStats(
        mean=Metrics(*values.mean(axis=0).tolist()),
        std=Metrics(*values.std(axis=0).tolist()),
        runs=tuple(runs),
    )


def _run_metrics(config: SimConfig) -> Metrics:
    return run(config).metrics


def run_configs(configs: Iterable[SimConfig], workers: int = 1) -> list[Metrics]:
    """Final metrics of each config, in input order."""
    configs = list(configs)
    if workers <= 1 or len(configs) <= 1:
        return [_run_metrics(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_metrics, configs))


def run_sweep(
    spec: SweepSpec,
    workers: int = 1,
    order: Sequence[int] | None = None,
    runner: Callable[[SimConfig], Metrics] | None = None,
) -> SweepTable:
    """Execute every run of ``spec`` and average per cell.

    Runs share nothing, so ``order`` (a permutation of job indices) and
    ``workers`` change only the schedule, never the table. ``runner``
    replaces the default single-run function (e.g. with a caching one) and
    is always called serially.
    """
    jobs = spec.jobs()
    idx = list(range(len(jobs))) if order is None else list(order)
    if sorted(idx) != list(range(len(jobs))):
        raise ValueError("order must be a permutation of the job indices")
    results: list[Metrics | None] = [None] * len(jobs)
    scheduled = [jobs[i] for i in idx]
    done = [runner(c) for c in scheduled] if runner is not None else run_configs(scheduled, workers)
    for i, m in zip(idx, done):
        results[i] = m
    k = spec.runs_per_cell
    cells = {
        cell: summarize(results[c * k:(c + 1) * k])  # type: ignore[arg-type]
        for c, cell in enumerate(spec.cells)
    }
    return SweepTable(spec, cells)
