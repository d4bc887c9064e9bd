"""Acceptance criteria 1-12, one test each, printing a PASS/FAIL line.

Full-length runs go through ``runcache`` so that criteria sharing a
configuration (alpha appears in 4, 7 and 9) simulate it once. A cold cache
needs roughly two hundred default-length runs.
"""

from __future__ import annotations

import filecmp
import math
import os
import time
from functools import lru_cache

import numpy as np
import pytest

from antforage import SimConfig, run
from antforage.agents import COOPERATOR, DORMANT, deposition_intensity
from antforage.engine import new_world, step
from antforage.experiments import SweepSpec, run_sweep, spotlight_configs
from antforage.grid import CHANNELS, FOOD_MISLEAD, HOME, build_grid, deposit, evaporate_all
from antforage.io import emit_run_csv
from runcache import cached_metrics, cached_run

SEEDS = tuple(range(10))
BASE = SimConfig()
SPOT = spotlight_configs(BASE)


@lru_cache(maxsize=None)
def seeded(config: SimConfig) -> tuple:
    return tuple(cached_run(config.with_(seed=s)) for s in SEEDS)


def mean_metric(config: SimConfig, name: str) -> float:
    return float(np.mean([getattr(r.metrics, name) for r in seeded(config)]))


def mean_series(config: SimConfig, name: str) -> tuple[np.ndarray, np.ndarray]:
    runs = seeded(config)
    return runs[0].steps, np.mean([r.series[name] for r in runs], axis=0)


def bits(config: SimConfig) -> float:
    return mean_metric(config, "bits_delivered_per_cooperator")


DEFENDED_ALPHA = SPOT["alpha"].with_(defense_enabled=True, rho_max=250.0, t_p=5.0)


# -- 1 ---------------------------------------------------------------------


def test_criterion_01_micro_formulas(criterion):
    problems = []
    if deposition_intensity(0.01, 0) != 1000.0:
        problems.append("intensity(0.01, 0) != 1000")
    expected = 1000.0 * math.exp(-1.0)
    if abs(deposition_intensity(0.01, 100) - expected) > 1e-9 * expected:
        problems.append("intensity(0.01, 100) off")

    cfg = SimConfig(m=3.0, k=1.7, dt=0.016)
    grid = build_grid(cfg)
    start = {ch: 900.0 - 100.0 * ch for ch in range(4)}
    for ch, level in start.items():
        deposit(grid, (0, 0), ch, level)
    rate = {ch: cfg.k * cfg.dt * (cfg.m if ch == FOOD_MISLEAD else 1.0) for ch in range(4)}
    worst = 0.0
    for t in range(1, 20_001):
        evaporate_all(grid, cfg)
        if t % 97 == 0 or t < 50:
            for ch in range(4):
                worst = max(worst, abs(grid.value(ch, 0, 0) - max(0.0, start[ch] - rate[ch] * t)))
    if worst > 1e-12 * 1000:
        problems.append(f"evaporation drift {worst:.3g}")

    grid = build_grid(BASE)
    for first, second, want in ((300.0, 500.0, 500.0), (800.0, 500.0, 800.0), (500.0, 500.0, 500.0)):
        grid = build_grid(BASE)
        deposit(grid, (1, 1), HOME, first)
        deposit(grid, (1, 1), HOME, second)
        if grid.value(HOME, 1, 1) != want:
            problems.append(f"max rule {first}->{second}")
    ok = not problems
    criterion(1, ok, "exact formulas" if ok else "; ".join(problems))
    assert ok, problems


# -- 2 ---------------------------------------------------------------------


def test_criterion_02_determinism(criterion, tmp_path):
    cfg = SPOT["alpha"].with_(N=3_000, seed=11)
    paths = []
    for k in range(2):
        paths.append(emit_run_csv(run(cfg), tmp_path / f"r{k}"))
    same_run = all(filecmp.cmp(a, b, shallow=False) for a, b in zip(*paths))

    spec = SweepSpec("m", (0.0, 10.0), "f_d", (0.0, 0.25), SimConfig(n=48, N=600, W=400.0, H=240.0,
                     L_nest=(200.0, 120.0), L_food=(60.0, 40.0)), runs_per_cell=3, seed_base=5)
    n_jobs = len(spec.jobs())
    forward = run_sweep(spec).rows()
    backward = run_sweep(spec, order=list(reversed(range(n_jobs)))).rows()
    shuffled = run_sweep(spec, order=list(np.random.default_rng(0).permutation(n_jobs))).rows()
    same_sweep = forward == backward == shuffled
    ok = same_run and same_sweep
    criterion(2, ok, f"run files identical={same_run}, sweep order-independent={same_sweep}")
    assert ok


# -- 3 ---------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_03_baseline(criterion):
    steps, frac = mean_series(BASE, "frac_delivered")
    at30 = float(frac[np.searchsorted(steps, 30_000)])
    at50 = mean_metric(BASE, "frac_delivered")
    b = bits(BASE)
    ok = at50 >= 0.90 and at30 >= 0.80 and b >= 10.0
    criterion(3, ok, f"frac_delivered@50k={at50:.4f} (>=0.90) @30k={at30:.4f} (>=0.80) bits/ant={b:.3f} (>=10)")
    assert ok


# -- 4 ---------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_04_attack_alpha(criterion):
    b = bits(SPOT["alpha"])
    frac = mean_metric(SPOT["alpha"], "frac_delivered")
    ratio = b / bits(BASE)
    ok = b <= 1.0 and frac <= 0.35 and ratio <= 0.1
    criterion(4, ok, f"bits/ant={b:.4f} (<=1.0) frac_delivered={frac:.4f} (<=0.35) ratio={ratio:.4f} (<=0.1)")
    assert ok


# -- 5 ---------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_05_attack_beta(criterion):
    cfg = SPOT["beta"]
    frac = mean_metric(cfg, "frac_collected")
    collected = mean_metric(cfg, "bits_collected_per_cooperator")
    second = mean_metric(cfg, "second_find_fraction")
    gap = abs(frac - collected)
    ok = frac <= 0.10 and gap <= 0.02 and second <= 0.001
    criterion(5, ok, f"frac_collected={frac:.4f} (<=0.10) |frac-bits|={gap:.4f} (<=0.02) second_find={second:.5f} (<=0.001)")
    assert ok


# -- 6 ---------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_06_attack_delta(criterion):
    cfg = SPOT["delta"]
    b = bits(cfg)
    steps, series = mean_series(cfg, "bits_collected_per_coop")
    tail = series[steps >= 0.8 * cfg.N]
    rising = bool(np.all(np.diff(tail) >= 0) and tail[-1] > tail[0])
    ok = b <= 1.0 and rising
    criterion(6, ok, f"bits/ant={b:.4f} (<=1.0) collected over final 20%: {tail[0]:.4f} -> {tail[-1]:.4f} rising={rising}")
    assert ok


# -- 7 / 8 -----------------------------------------------------------------

SUB_M = (0.0, 1.0, 10.0, 1000.0)
SUB_FD = (0.0039, 0.0313, 0.125, 0.5)


@lru_cache(maxsize=None)
def attack_subgrid():
    spec = SweepSpec("m", SUB_M, "f_d", SUB_FD, BASE, runs_per_cell=len(SEEDS), seed_base=SEEDS[0])
    return run_sweep(spec, runner=cached_metrics)


def _pooled(s1: float, s2: float) -> float:
    return math.sqrt((s1 * s1 + s2 * s2) / 2.0)


@pytest.mark.slow
def test_criterion_07_attack_ordering(criterion):
    table = attack_subgrid()
    mean = table.mean("bits_delivered_per_cooperator")
    std = table.std("bits_delivered_per_cooperator")
    bad = []
    for i in range(len(SUB_M)):
        for j in range(len(SUB_FD) - 1):
            if mean[i, j + 1] > mean[i, j] + _pooled(std[i, j], std[i, j + 1]):
                bad.append(f"m={SUB_M[i]:g}: f_d {SUB_FD[j]}->{SUB_FD[j + 1]} rises {mean[i, j]:.3f}->{mean[i, j + 1]:.3f}")
    for j in range(len(SUB_FD)):
        for i in range(len(SUB_M) - 1):
            if mean[i + 1, j] < mean[i, j] - _pooled(std[i, j], std[i + 1, j]):
                bad.append(f"f_d={SUB_FD[j]}: m {SUB_M[i]:g}->{SUB_M[i + 1]:g} falls {mean[i, j]:.3f}->{mean[i + 1, j]:.3f}")
    grid = "; ".join(f"m={m:g}: " + " ".join(f"{v:.3f}" for v in row) for m, row in zip(SUB_M, mean))
    ok = not bad
    criterion(7, ok, f"bits/ant [{grid}]" + ("" if ok else " violations: " + ", ".join(bad)))
    assert ok


@pytest.mark.slow
def test_criterion_08_collected_matches_delivered(criterion):
    table = attack_subgrid()
    col = table.mean("bits_collected_per_cooperator")
    dev = table.mean("bits_delivered_per_cooperator")
    bad = []
    worst = 1.0
    for i, m in enumerate(SUB_M):
        for j, fd in enumerate(SUB_FD):
            if fd > 0.125 or col[i, j] == 0:
                continue
            ratio = dev[i, j] / col[i, j]
            worst = min(worst, ratio)
            if ratio < 0.9:
                bad.append(f"(m={m:g}, f_d={fd}) ratio {ratio:.3f}")
    ok = not bad
    criterion(8, ok, f"min delivered/collected={worst:.4f} (>=0.9)" + ("" if ok else " " + ", ".join(bad)))
    assert ok


# -- 9 / 10 ----------------------------------------------------------------


@pytest.mark.slow
def test_criterion_09_defense_alpha(criterion):
    b = bits(DEFENDED_ALPHA)
    frac = mean_metric(DEFENDED_ALPHA, "frac_collected")
    gain = b / max(bits(SPOT["alpha"]), 1e-12)
    ok = b >= 4.0 and frac >= 0.75 and gain >= 10.0
    criterion(9, ok, f"bits/ant={b:.4f} (>=4) frac_collected={frac:.4f} (>=0.75) gain over alpha={gain:.2f}x (>=10)")
    assert ok


@pytest.mark.slow
def test_criterion_10_defense_failure_modes(criterion):
    beta_fast = SPOT["beta"].with_(defense_enabled=True, rho_max=250.0, t_p=1.0)
    slow_refill = DEFENDED_ALPHA.with_(t_p=100.0)
    b_beta = bits(beta_fast)
    b_slow = bits(slow_refill)
    b_ref = bits(DEFENDED_ALPHA)
    ok = b_beta <= 1.0 and b_slow < b_ref
    criterion(10, ok, f"(i) beta t_p=1 bits/ant={b_beta:.4f} (<=1.0) (ii) alpha t_p=100 bits/ant={b_slow:.4f} (< {b_ref:.4f})")
    assert ok


# -- 11 --------------------------------------------------------------------


def random_config(rng: np.random.Generator, seed: int) -> SimConfig:
    c = float(rng.choice([1.0, 2.0, 4.0, 5.0, 8.0]))
    nx, ny = int(rng.integers(8, 60)), int(rng.integers(8, 40))
    W, H = c * nx, c * ny
    n = int(rng.integers(0, 40))
    return SimConfig(
        n=n,
        N=int(rng.integers(0, 300)),
        W=W,
        H=H,
        c=c,
        L_nest=(float(rng.uniform(0, W)), float(rng.uniform(0, H))),
        r_nest=float(rng.uniform(0.5, 4.0) * c),
        L_food=(float(rng.uniform(0, W)), float(rng.uniform(0, H))),
        r_food=float(rng.uniform(0.5, 4.0) * c),
        v=float(rng.uniform(1.0, 400.0)),
        dt=float(rng.uniform(0.001, 0.1)),
        theta_s_max=float(rng.uniform(0.0, math.pi)),
        ls_max=float(rng.uniform(0.5, 80.0)),
        eta=float(rng.uniform(0.0, math.pi)),
        lam=float(rng.uniform(1e-4, 0.2)),
        tau_turn=int(rng.integers(1, 12)),
        tau_attack=int(rng.integers(0, 150)),
        chi=int(rng.integers(1, 33)),
        k=float(rng.uniform(0.0, 5.0)),
        m=float(rng.choice([0.0, 0.5, 1.0, 5.0, 1000.0])),
        f_d=float(rng.uniform(0.0, 1.0)) if rng.random() < 0.7 else 0.0,
        defense_enabled=bool(rng.random() < 0.5),
        rho_max=float(rng.uniform(1.0, 1000.0)),
        t_p=float(rng.uniform(1.0, 100.0)),
        food_capacity=None if rng.random() < 0.5 else int(rng.integers(0, 30)),
        trail_clock=str(rng.choice(["seconds", "steps"])),
        seed=seed,
        sample_every=int(rng.integers(1, 50)),
    )


def invariant_violations(cfg: SimConfig) -> list[str]:
    world = new_world(cfg)
    col, grid = world.colony, world.grid
    coop = col.role == COOPERATOR
    det_cells = np.zeros((grid.nx, grid.ny), dtype=bool)
    out: list[str] = []
    for _ in range(cfg.N):
        step(world)
        awake = (~coop) & (col.mode != DORMANT)
        if awake.any():
            i = np.minimum((col.x[awake] // grid.c).astype(int), grid.nx - 1)
            j = np.minimum((col.y[awake] // grid.c).astype(int), grid.ny - 1)
            det_cells[i, j] = True
        ch = grid.channels()
        if not (np.all(ch >= 0.0) and np.all(ch <= 1000.0)):
            out.append(f"step {world.step}: channel out of [0,1000]")
        if np.any(col.x < 0) or np.any(col.x > cfg.W) or np.any(col.y < 0) or np.any(col.y > cfg.H):
            out.append(f"step {world.step}: ant outside world")
        if np.any(col.delivered > col.collected):
            out.append(f"step {world.step}: delivered > collected")
        rho = col.rho[coop]
        if np.any(rho < 0) or np.any(rho > cfg.rho_max):
            out.append(f"step {world.step}: patience out of [0, rho_max]")
        if np.any((ch[FOOD_MISLEAD] > 0) & ~det_cells):
            out.append(f"step {world.step}: {CHANNELS[FOOD_MISLEAD]} without a detractor visit")
        if cfg.food_capacity is not None and col.collected.sum() > cfg.food_capacity:
            out.append(f"step {world.step}: more food collected than available")
        if out:
            break
    if grid.clamped_deposits:
        out.append(f"{grid.clamped_deposits} clamped deposits")
    return out


def test_criterion_11_fuzzed_invariants(criterion):
    rng = np.random.default_rng(2024)
    runs, failures = 1_000, []
    for r in range(runs):
        cfg = random_config(rng, seed=r)
        bad = invariant_violations(cfg)
        if bad:
            failures.append(f"run {r}: {bad[0]}")
    ok = not failures
    criterion(11, ok, f"{runs} fuzzed runs, {len(failures)} with violations" + ("" if ok else ": " + failures[0]))
    assert ok, failures[:5]


# -- 12 --------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_12_performance(criterion):
    run(BASE.with_(N=50))  # make sure compilation is not timed
    t0 = time.perf_counter()
    result = run(BASE)
    elapsed = time.perf_counter() - t0
    workers = os.cpu_count() or 1
    heatmap_h = 8 * 8 * 20 * elapsed / workers / 3600.0
    ok = elapsed <= 120.0 and heatmap_h <= 12.0 and result.steps[-1] == BASE.N
    criterion(12, ok, f"default run {elapsed:.1f}s (<=120s); 8x8x20 heatmap on {workers} core(s) ~{heatmap_h:.1f}h (<=12h)")
    assert ok
