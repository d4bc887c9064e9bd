"""Foraging success metrics."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

METRIC_NAMES = (
    "bits_collected_per_cooperator",
    "bits_delivered_per_cooperator",
    "frac_collected",
    "frac_delivered",
    "second_find_fraction",
)


class UndefinedMetricsError(ValueError):
    """Per-cooperator metrics need at least one cooperator."""


@dataclass(frozen=True)
class Metrics:
    bits_collected_per_cooperator: float = 0.0
    bits_delivered_per_cooperator: float = 0.0
    frac_collected: float = 0.0
    frac_delivered: float = 0.0
    second_find_fraction: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def metrics_from_counts(collected: np.ndarray, delivered: np.ndarray, population: int | None = None) -> Metrics:
    """Normalise per-ant pickup/delivery counts by ``population``.

    ``population`` defaults to ``len(collected)``; pass the whole colony size
    to get colony-wide figures from cooperator counts.
    """
    collected = np.asarray(collected)
    delivered = np.asarray(delivered)
    pop = len(collected) if population is None else population
    if pop <= 0:
        raise UndefinedMetricsError("no cooperators to normalise by")
    return Metrics(
        bits_collected_per_cooperator=float(collected.sum()) / pop,
        bits_delivered_per_cooperator=float(delivered.sum()) / pop,
        frac_collected=float(np.count_nonzero(collected >= 1)) / pop,
        frac_delivered=float(np.count_nonzero(delivered >= 1)) / pop,
        second_find_fraction=float(np.count_nonzero(collected >= 2)) / pop,
    )


def compute_metrics(run, cooperator_count: int | None = None) -> Metrics:
    """Final metrics of a finished run, per cooperator.

    Raises :class:`UndefinedMetricsError` when the colony had no cooperators.
    """
    pop = run.n_cooperators if cooperator_count is None else cooperator_count
    if pop <= 0:
        raise UndefinedMetricsError("no cooperators to normalise by")
    return metrics_from_counts(run.collected, run.delivered, pop)
