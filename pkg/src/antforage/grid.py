"""Pheromone grid: cell kinds, deposition, linear evaporation, probe geometry.

Evaporation is applied lazily. Each channel value is stored together with
the grid clock at which it was last written, and the current value is
``max(0, level - rate * (clock - written))``. Levels and write clocks of a
cell sit next to each other (``cells[i, j, ch]`` and ``cells[i, j, 4 + ch]``)
so one sensing read touches a single cache line. Advancing the clock by one is
therefore exactly one application of the linear decay to every cell, in
O(1) instead of O(cells).
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np
from numba import njit

from .config import ConfigError, SimConfig

MAX_INTENSITY = 1000.0

EMPTY = 0
NEST = 1
FOOD = 2

HOME = 0
FOOD_COOP = 1
FOOD_MISLEAD = 2
CAUTIONARY = 3

CHANNELS = ("home", "food_coop", "food_mislead", "cautionary")


class CellKind(IntEnum):
    EMPTY = EMPTY
    NEST = NEST
    FOOD = FOOD


class Channel(IntEnum):
    HOME = HOME
    FOOD_COOP = FOOD_COOP
    FOOD_MISLEAD = FOOD_MISLEAD
    CAUTIONARY = CAUTIONARY


# --- compiled primitives, shared by the Python API and the step kernel ---


@njit(cache=True, inline="always")
def cell_index(x, y, c, nx, ny):
    i = int(x / c)
    j = int(y / c)
    # x == W lands on the closing edge of the last column.
    if i >= nx:
        i = nx - 1
    if j >= ny:
        j = ny - 1
    return i, j


@njit(cache=True, inline="always")
def channel_value(cells, rates, clock, ch, i, j):
    v = cells[i, j, ch] - rates[ch] * (clock - cells[i, j, 4 + ch])
    return v if v > 0.0 else 0.0


@njit(cache=True, inline="always")
def sensed_food(cells, rates, clock, i, j):
    a = channel_value(cells, rates, clock, FOOD_COOP, i, j)
    b = channel_value(cells, rates, clock, FOOD_MISLEAD, i, j)
    return a if a > b else b


@njit(cache=True, inline="always")
def deposit_cell(kind, cells, rates, clock, diag, ch, i, j, intensity):
    """Max-rule deposit; returns True if the cell accepted pheromone."""
    if kind[i, j] != EMPTY:
        return False
    if intensity > MAX_INTENSITY or intensity < 0.0 or intensity != intensity:
        diag[0] += 1
        if intensity > MAX_INTENSITY:
            intensity = MAX_INTENSITY
        else:
            intensity = 0.0
    if intensity > channel_value(cells, rates, clock, ch, i, j):
        cells[i, j, ch] = intensity
        cells[i, j, 4 + ch] = clock
    return True


class PheromoneGrid:
    """The discretised world.

    Arrays are indexed ``[i, j]`` with ``i`` the column (x) and ``j`` the
    row (y); cell ``(i, j)`` covers ``[i*c, (i+1)*c) x [j*c, (j+1)*c)``.
    """

    def __init__(self, config: SimConfig):
        self.c = float(config.c)
        self.W = float(config.W)
        self.H = float(config.H)
        self.nx = config.nx
        self.ny = config.ny
        self.kind = np.zeros((self.nx, self.ny), dtype=np.int8)
        # [..., :4] channel level at last write, [..., 4:] clock of that write
        self.cells = np.zeros((self.nx, self.ny, 8), dtype=np.float64)
        step_decay = config.k * config.dt
        self.rates = np.array(
            [step_decay, step_decay, config.m * config.k * config.dt, step_decay],
            dtype=np.float64,
        )
        self.clock = 0
        # diag[0]: clamped deposits
        self.diag = np.zeros(1, dtype=np.int64)
        self.food_mask = np.zeros((self.nx, self.ny), dtype=bool)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nx, self.ny

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def clamped_deposits(self) -> int:
        return int(self.diag[0])

    def cell_of(self, x: float, y: float) -> tuple[int, int] | None:
        if not (0.0 <= x <= self.W and 0.0 <= y <= self.H):
            return None
        return cell_index(x, y, self.c, self.nx, self.ny)

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        return (i + 0.5) * self.c, (j + 0.5) * self.c

    def value(self, channel: int | str, i: int, j: int) -> float:
        ch = _channel(channel)
        return float(channel_value(self.cells, self.rates, self.clock, ch, i, j))

    def sensed_food(self, i: int, j: int) -> float:
        return float(sensed_food(self.cells, self.rates, self.clock, i, j))

    def channel(self, channel: int | str) -> np.ndarray:
        """Dense copy of one channel at the current clock."""
        ch = _channel(channel)
        age = self.clock - self.cells[:, :, 4 + ch]
        return np.maximum(self.cells[:, :, ch] - self.rates[ch] * age, 0.0)

    def channels(self) -> np.ndarray:
        """Dense ``(4, nx, ny)`` copy of all channels at the current clock."""
        return np.stack([self.channel(ch) for ch in range(4)])

    def sensed_food_field(self) -> np.ndarray:
        return np.maximum(self.channel(FOOD_COOP), self.channel(FOOD_MISLEAD))

    def deplete_food(self) -> None:
        """Food ran out: food cells turn back into empty cells."""
        self.kind[self.kind == FOOD] = EMPTY


def _channel(channel: int | str) -> int:
    if isinstance(channel, str):
        try:
            return CHANNELS.index(channel)
        except ValueError:
            raise KeyError(f"unknown channel {channel!r}") from None
    return int(channel)


def build_grid(config: SimConfig) -> PheromoneGrid:
    """All channels zero; a cell is nest/food when its centre lies in the disc."""
    for name in ("W", "H"):
        cells = getattr(config, name) / config.c
        if abs(cells - round(cells)) > 1e-9:
            raise ConfigError(f"{name}: {getattr(config, name)} is not divisible by c={config.c}")
    grid = PheromoneGrid(config)
    cx = (np.arange(grid.nx) + 0.5) * grid.c
    cy = (np.arange(grid.ny) + 0.5) * grid.c
    X, Y = np.meshgrid(cx, cy, indexing="ij")
    nest = (X - config.L_nest[0]) ** 2 + (Y - config.L_nest[1]) ** 2 <= config.r_nest**2
    food = (X - config.L_food[0]) ** 2 + (Y - config.L_food[1]) ** 2 <= config.r_food**2
    grid.kind[nest] = NEST
    grid.kind[food & ~nest] = FOOD
    grid.food_mask = food & ~nest
    if config.food_capacity == 0:
        grid.deplete_food()
    return grid


def deposit(grid: PheromoneGrid, cell: tuple[int, int], channel: int | str, intensity: float) -> bool:
    """Raise ``channel`` at ``cell`` to ``max(current, intensity)``.

    Nest and food cells take no pheromone (returns False). Intensities
    outside [0, 1000] are clamped and counted in ``grid.clamped_deposits``.
    """
    i, j = cell
    return bool(
        deposit_cell(
            grid.kind, grid.cells, grid.rates, float(grid.clock), grid.diag,
            _channel(channel), i, j, float(intensity),
        )
    )


def evaporate_all(grid: PheromoneGrid, config: SimConfig | None = None) -> PheromoneGrid:
    """One step of linear decay on every channel, floored at zero.

    Home, cooperative food and cautionary lose ``k*dt``; misleading food
    loses ``m*k*dt``. The rates are fixed when the grid is built, so
    ``config`` is accepted only for call-site symmetry.
    """
    grid.clock += 1
    return grid


def cells_in_probe(
    grid: PheromoneGrid,
    pose: tuple[float, float, float],
    probes,
) -> list[tuple[int, int]]:
    """Cells under the endpoints of ``(length, angle)`` probes.

    Angles are relative to the pose heading. Endpoints outside the world
    are dropped; duplicates are kept in probe order.
    """
    x, y, theta = pose
    out = []
    for length, angle in probes:
        ex = x + length * np.cos(theta + angle)
        ey = y + length * np.sin(theta + angle)
        cell = grid.cell_of(ex, ey)
        if cell is not None:
            out.append(cell)
    return out
