"""The simulation loop.

Each step: evaporate every channel, then move and update every ant in index
order, then advance the step counter and sample metrics. One
``numpy.random.Generator`` per run is consumed in a fixed order (per step:
``n`` noise draws, then on decision steps ``n * chi`` probe lengths and
angles), so ``(config, seed)`` determines the whole trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .agents import COOPERATOR, Colony, advance_colony, draw_probes, probe_offsets, spawn_colony
from .config import SimConfig
from .grid import PheromoneGrid, build_grid, evaporate_all
from .metrics import METRIC_NAMES, Metrics, metrics_from_counts

SERIES_FIELDS = (
    "bits_collected_per_coop",
    "bits_delivered_per_coop",
    "frac_collected",
    "frac_delivered",
)


@dataclass(frozen=True)
class Snapshot:
    """Read-only copy of the world handed to snapshot callbacks."""

    step: int
    channels: np.ndarray  # (4, nx, ny): home, food_coop, food_mislead, cautionary
    kind: np.ndarray
    x: np.ndarray
    y: np.ndarray
    role: np.ndarray


@dataclass
class WorldState:
    config: SimConfig
    grid: PheromoneGrid
    colony: Colony
    rng: np.random.Generator
    step: int = 0
    food_left: np.ndarray = field(default_factory=lambda: np.array([-1], dtype=np.int64))
    samples: list[tuple[int, Metrics]] = field(default_factory=list)

    @property
    def cooperator_mask(self) -> np.ndarray:
        return self.colony.role == COOPERATOR

    def metrics(self) -> Metrics:
        coop = self.cooperator_mask
        return metrics_from_counts(self.colony.collected[coop], self.colony.delivered[coop], max(int(coop.sum()), 1))

    def snapshot(self) -> Snapshot:
        return Snapshot(
            step=self.step,
            channels=self.grid.channels(),
            kind=self.grid.kind.copy(),
            x=self.colony.x.copy(),
            y=self.colony.y.copy(),
            role=self.colony.role.copy(),
        )


@dataclass
class RunResult:
    config: SimConfig
    seed: int
    metrics: Metrics
    steps: np.ndarray
    series: dict[str, np.ndarray]
    collected: np.ndarray  # per cooperator
    delivered: np.ndarray
    first_collect_step: np.ndarray  # -1 = never
    first_deliver_step: np.ndarray
    n_cooperators: int
    n_detractors: int
    clamped_deposits: int = 0

    @property
    def colony_metrics(self) -> Metrics:
        """Same counts normalised by the whole colony, detractors included."""
        return metrics_from_counts(self.collected, self.delivered, max(self.config.n, 1))


def new_world(config: SimConfig) -> WorldState:
    rng = np.random.default_rng(config.seed)
    grid = build_grid(config)
    colony = spawn_colony(config, rng)
    world = WorldState(config=config, grid=grid, colony=colony, rng=rng)
    if config.food_capacity is not None:
        world.food_left[0] = config.food_capacity
    world.samples.append((0, world.metrics()))
    return world


def step(world: WorldState, config: SimConfig | None = None) -> WorldState:
    """Advance ``world`` by one step in place and return it."""
    config = world.config if config is None else config
    grid, col = world.grid, world.colony
    n = len(col)
    evaporate_all(grid, config)
    noise = world.rng.uniform(-config.eta, config.eta, n)
    decide = world.step % config.tau_turn == 0
    if decide:
        fwd, side = probe_offsets(*draw_probes(world.rng, config, n))
    else:
        fwd = side = _NO_PROBES
    advance_colony(
        col.ants, world.step, decide, noise, fwd, side,
        grid.kind, grid.cells, grid.rates, float(grid.clock), grid.diag,
        world.food_left, grid.food_mask, grid.c, grid.nx, grid.ny, grid.W, grid.H,
        config.v * config.dt, config.tick, config.lam, config.tau_attack, config.defense_enabled,
        float(config.t_p), float(config.rho_max),
    )
    world.step += 1
    if world.step % config.sample_every == 0:
        world.samples.append((world.step, world.metrics()))
    return world


_NO_PROBES = np.zeros((0, 0))


def run(
    config: SimConfig,
    on_snapshot: Callable[[Snapshot], None] | None = None,
    snapshot_every: int = 0,
) -> RunResult:
    """Spawn, iterate ``config.N`` steps and collect the results.

    If ``on_snapshot`` is given it receives a :class:`Snapshot` at step 0
    and every ``snapshot_every`` steps after that.
    """
    world = new_world(config)
    if on_snapshot is not None and snapshot_every > 0:
        on_snapshot(world.snapshot())
    for _ in range(config.N):
        step(world, config)
        if on_snapshot is not None and snapshot_every > 0 and world.step % snapshot_every == 0:
            on_snapshot(world.snapshot())
    return finish(world)


def finish(world: WorldState) -> RunResult:
    config = world.config
    coop = world.cooperator_mask
    col = world.colony
    steps = np.array([s for s, _ in world.samples], dtype=np.int64)
    series = {
        name: np.array([getattr(m, metric) for _, m in world.samples])
        for name, metric in zip(SERIES_FIELDS, METRIC_NAMES[:4])
    }
    return RunResult(
        config=config,
        seed=config.seed,
        metrics=world.metrics(),
        steps=steps,
        series=series,
        collected=col.collected[coop].copy(),
        delivered=col.delivered[coop].copy(),
        first_collect_step=col.first_collect[coop].copy(),
        first_deliver_step=col.first_deliver[coop].copy(),
        n_cooperators=int(coop.sum()),
        n_detractors=int((~coop).sum()),
        clamped_deposits=world.grid.clamped_deposits,
    )
