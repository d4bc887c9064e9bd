"""
A small attack heatmap
======================

The attack has two knobs: how many detractors there are (``f_d``) and how
fast their misleading pheromone evaporates relative to normal trails
(``m``; zero means it never fades). Sweeping both gives a heatmap of
cooperator success.

A full 8 x 8 grid with 20 seeds per cell is an overnight job. This script
runs a 4 x 4 corner of it on a quarter-size world with two seeds per cell,
which finishes in a few minutes, and writes ``sweep.csv``.
"""

import os

from antforage import SimConfig
from antforage.experiments import SweepSpec, run_sweep
from antforage.io import emit_sweep_csv

# A 960 x 540 world with the nest in the middle and food in the corner.
base = SimConfig(n=256, N=20_000, W=960.0, H=540.0, L_nest=(480.0, 270.0), L_food=(186.0, 18.0))
spec = SweepSpec("m", (0.0, 1.0, 10.0, 1000.0), "f_d", (0.0039, 0.0313, 0.125, 0.5), base, runs_per_cell=2)

table = run_sweep(spec, workers=os.cpu_count() or 1)
path = emit_sweep_csv(table, "out/sweep")

###############################################################################
# Rows are the evaporation multiplier, columns the detractor fraction. Fewer
# detractors and faster-fading fake trails both help the colony.

means = table.mean("bits_delivered_per_cooperator")
print("m \\ f_d " + "".join(f"{fd:>9}" for fd in spec.axis2))
for m, row in zip(spec.axis1, means):
    print(f"{m:>7g} " + "".join(f"{v:9.3f}" for v in row))
print("wrote", path)
