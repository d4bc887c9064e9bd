"""Cooperator and detractor behaviour.

The colony is one numpy record array so the compiled step kernel can walk
it without Python objects. ``Colony[i]`` returns a read-only :class:`Ant`
snapshot for inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .config import SimConfig
from .grid import (
    CAUTIONARY,
    EMPTY,
    FOOD,
    FOOD_COOP,
    FOOD_MISLEAD,
    HOME,
    MAX_INTENSITY,
    NEST,
    PheromoneGrid,
    cell_index,
    channel_value,
    deposit_cell,
    sensed_food,
)

COOPERATOR = 0
DETRACTOR = 1

TO_FOOD = 0
TO_HOME = 1
DORMANT = 2

ROLE_NAMES = ("cooperator", "detractor")
MODE_NAMES = ("to_food", "to_home", "dormant")

TWO_PI = 2.0 * math.pi


@njit(cache=True, inline="always")
def intensity_at(lam, clock):
    return MAX_INTENSITY * math.exp(-lam * clock)


def deposition_intensity(lam: float, clock: float) -> float:
    """Trail strength ``1000 * exp(-lam * clock)``.

    ``clock`` is the age of the trail: time since leaving the nest or
    finding food, time since a detractor's last nest visit, or a
    cooperator's current patience for cautionary pheromone. Trail ages
    advance by ``SimConfig.tick`` per step.
    """
    return float(intensity_at(lam, clock))


@njit(cache=True, inline="always")
def wrap_angle(theta):
    # headings drift by at most a few turns per call; float % is slow here
    while theta >= TWO_PI:
        theta -= TWO_PI
    while theta < 0.0:
        theta += TWO_PI
    # -1e-17 + 2*pi rounds to 2*pi
    return theta if theta < TWO_PI else 0.0


@njit(cache=True, inline="always")
def patience_step(rho, food_sensed, t_p, rho_max, drain):
    if food_sensed:
        rho -= drain
        return rho if rho > 0.0 else 0.0
    rho += rho_max / t_p
    return rho if rho < rho_max else rho_max


def patience_update(rho: float, food_sensed: bool, t_p: float, rho_max: float, drain: float = 1.0) -> float:
    """Patience drains by ``drain`` per step while food pheromone is in range
    and otherwise refills at ``rho_max / t_p`` per step, clamped to
    [0, rho_max]. ``drain`` is one clock tick (``SimConfig.tick``)."""
    return float(patience_step(float(rho), bool(food_sensed), float(t_p), float(rho_max), float(drain)))


@njit(cache=True, inline="always")
def choose_direction(x, y, theta, mode, fwd, side, row,
                     cells, rates, clock, c, nx, ny, W, H, caution_filter):
    """Argmax over probed cells; returns (new heading, food pheromone seen).

    Probe ``p`` of ant ``row`` ends at ``fwd[row, p]`` units along the heading
    and ``side[row, p]`` units to its left.
    """
    best = 0.0
    bi = -1
    bj = -1
    seen_food = False
    ct = math.cos(theta)
    st = math.sin(theta)
    for p in range(fwd.shape[1]):
        f = fwd[row, p]
        s = side[row, p]
        ex = x + f * ct - s * st
        ey = y + f * st + s * ct
        if ex < 0.0 or ex > W or ey < 0.0 or ey > H:
            continue
        i, j = cell_index(ex, ey, c, nx, ny)
        if mode == TO_HOME:
            val = channel_value(cells, rates, clock, HOME, i, j)
        else:
            val = sensed_food(cells, rates, clock, i, j)
            if val > 0.0:
                seen_food = True
            if caution_filter and channel_value(cells, rates, clock, CAUTIONARY, i, j) > val:
                continue
        # strict '>' keeps the lowest probe index on ties
        if val > best:
            best = val
            bi = i
            bj = j
    if bi < 0:
        return theta, seen_food
    dx = (bi + 0.5) * c - x
    dy = (bj + 0.5) * c - y
    if dx == 0.0 and dy == 0.0:
        return theta, seen_food
    return wrap_angle(math.atan2(dy, dx)), seen_food


@njit(cache=True, inline="always")
def move(x, y, heading, w, vdt, W, H, kind, c, nx, ny):
    """Advance one step; returns (x, y, theta, heading, contacted cell kind).

    Leaving the world, or stepping from an empty cell into a nest/food cell,
    mirrors the heading about the crossed face and recomputes the step.
    """
    phi = heading + w
    px = x + vdt * math.cos(phi)
    py = y + vdt * math.sin(phi)
    flipped = False
    if px < 0.0 or px > W:
        phi = math.pi - phi
        heading = math.pi - heading
        flipped = True
    if py < 0.0 or py > H:
        phi = -phi
        heading = -heading
        flipped = True
    if flipped:
        px = x + vdt * math.cos(phi)
        py = y + vdt * math.sin(phi)
        if px < 0.0 or px > W or py < 0.0 or py > H:
            px = x
            py = y
    contact = EMPTY
    i0, j0 = cell_index(x, y, c, nx, ny)
    i1, j1 = cell_index(px, py, c, nx, ny)
    if kind[i0, j0] == EMPTY and kind[i1, j1] != EMPTY:
        contact = kind[i1, j1]
        if i1 != i0:
            phi = math.pi - phi
            heading = math.pi - heading
        if j1 != j0:
            phi = -phi
            heading = -heading
        px = x + vdt * math.cos(phi)
        py = y + vdt * math.sin(phi)
        if px < 0.0 or px > W or py < 0.0 or py > H:
            px = x
            py = y
        else:
            i2, j2 = cell_index(px, py, c, nx, ny)
            if kind[i2, j2] != EMPTY:
                px = x
                py = y
    return px, py, wrap_angle(phi), wrap_angle(heading), contact


@njit(cache=True, inline="always")
def act_cooperator(ants, a, step, contact, kind, cells, rates, clock, diag, food_left, food_mask,
                   c, nx, ny, tick, lam, defense, t_p, rho_max):
    """Contact transitions, then deposits and patience, for cooperator ``a``."""
    ant = ants[a]
    if contact == FOOD and ant.mode == TO_FOOD:
        ant.carrying = True
        ant.mode = TO_HOME
        ant.tau = 0
        ant.rho = rho_max
        ant.collected += 1
        if ant.first_collect < 0:
            ant.first_collect = step
        if food_left[0] > 0:
            food_left[0] -= 1
            if food_left[0] == 0:
                deplete(kind, food_mask)
    elif contact == NEST:
        if ant.mode == TO_HOME:
            ant.carrying = False
            ant.delivered += 1
            if ant.first_deliver < 0:
                ant.first_deliver = step
            ant.mode = TO_FOOD
        ant.tau = 0
    i, j = cell_index(ant.x, ant.y, c, nx, ny)
    if ant.mode == TO_FOOD:
        deposit_cell(kind, cells, rates, clock, diag, HOME, i, j, intensity_at(lam, ant.tau * tick))
        if defense:
            deposit_cell(kind, cells, rates, clock, diag, CAUTIONARY, i, j, intensity_at(lam, ant.rho))
            ant.rho = patience_step(ant.rho, ant.food_sensed, t_p, rho_max, tick)
    else:
        deposit_cell(kind, cells, rates, clock, diag, FOOD_COOP, i, j, intensity_at(lam, ant.tau * tick))
    ant.tau += 1


@njit(cache=True)
def deplete(kind, food_mask):
    for i in range(kind.shape[0]):
        for j in range(kind.shape[1]):
            if food_mask[i, j] and kind[i, j] == FOOD:
                kind[i, j] = EMPTY


@njit(cache=True, inline="always")
def act_detractor(ants, a, contact, kind, cells, rates, clock, diag, c, nx, ny, lam, tick):
    ant = ants[a]
    if contact == NEST:
        ant.tau_d = 0
    i, j = cell_index(ant.x, ant.y, c, nx, ny)
    deposit_cell(kind, cells, rates, clock, diag, FOOD_MISLEAD, i, j, intensity_at(lam, ant.tau_d * tick))
    ant.tau_d += 1


@njit(cache=True)
def advance_colony(ants, step, decide, noise, fwd, side,
                   kind, cells, rates, clock, diag, food_left, food_mask,
                   c, nx, ny, W, H, vdt, tick, lam, tau_attack, defense, t_p, rho_max):
    """One step of every ant, in index order."""
    for a in range(ants.shape[0]):
        ant = ants[a]
        if ant.mode == DORMANT:
            if step < tau_attack:
                continue
            ant.mode = TO_FOOD
            ant.tau_d = 0
        if decide:
            filt = defense and ant.mode == TO_FOOD
            th, seen = choose_direction(ant.x, ant.y, ant.theta, ant.mode, fwd, side, a,
                                        cells, rates, clock, c, nx, ny, W, H, filt)
            ant.heading = th
            ant.food_sensed = seen
        px, py, th, hd, contact = move(ant.x, ant.y, ant.heading, noise[a], vdt, W, H, kind, c, nx, ny)
        ant.x = px
        ant.y = py
        ant.theta = th
        ant.heading = hd
        if ant.role == COOPERATOR:
            act_cooperator(ants, a, step, contact, kind, cells, rates, clock, diag, food_left,
                           food_mask, c, nx, ny, tick, lam, defense, t_p, rho_max)
        else:
            act_detractor(ants, a, contact, kind, cells, rates, clock, diag, c, nx, ny, lam, tick)


@dataclass(frozen=True)
class Ant:
    x: float
    y: float
    theta: float
    role: str
    mode: str
    tau: int
    tau_d: int
    rho: float
    carrying: bool
    heading: float
    collected: int
    delivered: int


ANT_DTYPE = np.dtype(
    [
        ("x", "f8"),
        ("y", "f8"),
        ("theta", "f8"),
        ("heading", "f8"),
        ("rho", "f8"),
        ("tau", "i8"),
        ("tau_d", "i8"),
        ("collected", "i8"),
        ("delivered", "i8"),
        ("first_collect", "i8"),
        ("first_deliver", "i8"),
        ("role", "i1"),
        ("mode", "i1"),
        ("carrying", "?"),
        ("food_sensed", "?"),
    ],
    align=True,
)


class Colony:
    """``n`` ants in one record array; cooperators first, then detractors.

    Field views (``colony.x``, ``colony.mode`` ...) are writable. One record
    per ant keeps the compiled kernel to a single array argument, which
    matters: every extra array handed to an inner call costs reference
    counting on each ant.
    """

    def __init__(self, n: int):
        self.ants = np.zeros(n, dtype=ANT_DTYPE)
        self.ants["first_collect"] = -1
        self.ants["first_deliver"] = -1

    def __len__(self) -> int:
        return self.ants.shape[0]

    def __getattr__(self, name: str) -> np.ndarray:
        if name in ANT_DTYPE.names:
            return self.ants[name]
        raise AttributeError(name)

    def __getitem__(self, a: int) -> Ant:
        r = self.ants[a]
        return Ant(
            x=float(r["x"]), y=float(r["y"]), theta=float(r["theta"]),
            role=ROLE_NAMES[r["role"]], mode=MODE_NAMES[r["mode"]],
            tau=int(r["tau"]), tau_d=int(r["tau_d"]), rho=float(r["rho"]),
            carrying=bool(r["carrying"]), heading=float(r["heading"]),
            collected=int(r["collected"]), delivered=int(r["delivered"]),
        )

    @property
    def cooperators(self) -> np.ndarray:
        return self.ants["role"] == COOPERATOR

    @property
    def detractors(self) -> np.ndarray:
        return self.ants["role"] == DETRACTOR


def spawn_colony(config: SimConfig, rng: np.random.Generator | None = None) -> Colony:
    """Cooperators evenly spaced on the nest rim facing outward; detractors
    dormant at the nest centre facing the food.

    Placement is deterministic, so ``rng`` is never consumed.
    """
    n_det = config.n_detractors
    n_coop = config.n - n_det
    col = Colony(config.n)
    nx0, ny0 = config.L_nest
    angles = TWO_PI * np.arange(n_coop) / max(n_coop, 1)
    col.x[:n_coop] = nx0 + config.r_nest * np.cos(angles)
    col.y[:n_coop] = ny0 + config.r_nest * np.sin(angles)
    col.theta[:n_coop] = angles
    col.mode[:n_coop] = TO_FOOD
    col.rho[:n_coop] = config.rho_max
    to_food = math.atan2(config.L_food[1] - ny0, config.L_food[0] - nx0) % TWO_PI
    col.x[n_coop:] = nx0
    col.y[n_coop:] = ny0
    col.theta[n_coop:] = to_food
    col.role[n_coop:] = DETRACTOR
    col.mode[n_coop:] = DORMANT
    np.clip(col.x, 0.0, config.W, out=col.x)
    np.clip(col.y, 0.0, config.H, out=col.y)
    col.heading[:] = col.theta
    return col


def draw_probes(rng: np.random.Generator, config: SimConfig, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(lengths, angles)``, each ``(n, chi)``: uniform lengths in
    [0, ls_max] and angles in [-theta_s_max, theta_s_max] off the heading."""
    lengths = rng.uniform(0.0, config.ls_max, (n, config.chi))
    angles = rng.uniform(-config.theta_s_max, config.theta_s_max, (n, config.chi))
    return lengths, angles


def probe_offsets(lengths: np.ndarray, angles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Heading-frame components of each probe, for :func:`choose_direction`.

    The unit vectors are evaluated in single precision (about 14x faster
    here); the ~1e-7 rad perturbation of a uniformly drawn angle is far
    below anything the cell lookup can resolve.
    """
    lengths = np.atleast_2d(np.asarray(lengths, dtype=np.float64))
    angles32 = np.atleast_2d(np.asarray(angles, dtype=np.float32))
    return lengths * np.cos(angles32), lengths * np.sin(angles32)


def select_direction(
    colony: Colony,
    a: int,
    grid: PheromoneGrid,
    config: SimConfig,
    rng: np.random.Generator | None = None,
    *,
    probes: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Pick the committed heading for ant ``a`` from ``chi`` random probes.

    To-food ants read the strongest of the two food channels, to-home ants
    the home channel. With the defense on, to-food ants skip cells whose
    cautionary level exceeds their food level. No usable cell means keep
    going straight. Pass ``probes=(lengths, angles)`` to bypass ``rng``.
    """
    if probes is None:
        probes = draw_probes(rng, config, 1)
    fwd, side = probe_offsets(*probes)
    mode = int(colony.mode[a])
    filt = bool(config.defense_enabled and mode == TO_FOOD)
    th, seen = choose_direction(
        float(colony.x[a]), float(colony.y[a]), float(colony.theta[a]), mode, fwd, side, 0,
        grid.cells, grid.rates, float(grid.clock), grid.c, grid.nx, grid.ny,
        grid.W, grid.H, filt,
    )
    colony.heading[a] = th
    colony.food_sensed[a] = seen
    return float(th)


def step_motion(
    colony: Colony,
    a: int,
    heading: float,
    config: SimConfig,
    grid: PheromoneGrid,
    rng: np.random.Generator | None = None,
    *,
    noise: float | None = None,
) -> int:
    """Move ant ``a`` one step along ``heading`` plus uniform noise.

    Updates the pose in place and returns the kind of cell the ant bumped
    into (``EMPTY`` when nothing was hit).
    """
    if noise is None:
        noise = rng.uniform(-config.eta, config.eta)
    px, py, th, hd, contact = move(
        colony.x[a], colony.y[a], float(heading), float(noise), config.v * config.dt,
        grid.W, grid.H, grid.kind, grid.c, grid.nx, grid.ny,
    )
    colony.x[a], colony.y[a], colony.theta[a], colony.heading[a] = px, py, th, hd
    return int(contact)


def update_cooperator(
    colony: Colony,
    a: int,
    grid: PheromoneGrid,
    config: SimConfig,
    contact: int = EMPTY,
    step: int = 0,
    food_left: np.ndarray | None = None,
) -> None:
    """Apply pickup/delivery for ``contact``, then lay this step's pheromone."""
    if food_left is None:
        food_left = np.array([-1], dtype=np.int64)
    act_cooperator(
        colony.ants, a, step, contact, grid.kind, grid.cells, grid.rates, float(grid.clock),
        grid.diag, food_left, grid.food_mask, grid.c, grid.nx, grid.ny,
        config.tick, config.lam, config.defense_enabled, float(config.t_p), float(config.rho_max),
    )


def update_detractor(
    colony: Colony,
    a: int,
    grid: PheromoneGrid,
    config: SimConfig,
    step: int,
    contact: int = EMPTY,
) -> bool:
    """Wake-up and deposit logic for detractor ``a``; returns False while dormant."""
    if colony.mode[a] == DORMANT:
        if step < config.tau_attack:
            return False
        colony.mode[a] = TO_FOOD
        colony.tau_d[a] = 0
    act_detractor(
        colony.ants, a, contact, grid.kind, grid.cells, grid.rates, float(grid.clock),
        grid.diag, grid.c, grid.nx, grid.ny, config.lam, config.tick,
    )
    return True
