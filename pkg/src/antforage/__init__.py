"""Agent-based ant foraging with misleading and cautionary pheromone."""

from .config import ConfigError, SimConfig, load_config
from .engine import RunResult, Snapshot, WorldState, new_world, run, step
from .metrics import Metrics, compute_metrics

__all__ = [
    "ConfigError",
    "Metrics",
    "RunResult",
    "SimConfig",
    "Snapshot",
    "WorldState",
    "compute_metrics",
    "load_config",
    "new_world",
    "run",
    "step",
]
