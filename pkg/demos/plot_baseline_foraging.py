"""
Foraging without an attack
==========================

A colony of 1024 ants leaves the nest in the middle of the world, finds the
food source in the upper left corner and settles into a trail between the
two. This script runs the default colony, prints how the cumulative success
metrics grow, and drops a few PPM frames next to it.

A full run takes about half a minute on one core.
"""

from pathlib import Path

import numpy as np

from antforage import SimConfig
from antforage.io import emit_run_csv
from antforage.render import render_frames

out = Path("out/baseline")

# Default parameters: 1024 cooperators, 50,000 steps of 16 ms.
config = SimConfig(seed=1)

# Frames every 10,000 steps; the run result comes back with them.
result, frames = render_frames(config, 10_000, out)
emit_run_csv(result, out)

###############################################################################
# The series are sampled every 100 steps. Food pheromone only appears once
# the first ants reach the food, after which trail following takes over and
# nearly everyone has made a delivery well before the end.

for s in range(0, config.N + 1, 5_000):
    k = int(np.searchsorted(result.steps, s))
    print(
        f"step {s:>6}: bits/ant {result.series['bits_delivered_per_coop'][k]:7.3f}"
        f"  delivered at least once {result.series['frac_delivered'][k]:.3f}"
    )

print(result.metrics)
print("frames:", ", ".join(p.name for p in frames))
