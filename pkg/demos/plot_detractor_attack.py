"""
Misleading pheromone from a few detractors
==========================================

Detractors look like ordinary ants but lay food pheromone around the nest
whenever they are not carrying anything real. Their trail is refreshed each
time they touch the nest, so cooperators leaving home keep running into a
strong food signal that leads nowhere.

Here 32 of 1024 ants (configuration ``alpha``) are enough to wreck the
colony. The same seed is run with and without them.
"""

import numpy as np

from antforage import SimConfig, run
from antforage.experiments import spotlight_configs

base = SimConfig(seed=1)
attacked = spotlight_configs(base)["alpha"]
print(f"detractors: {attacked.n_detractors} of {attacked.n}, misleading decay x{attacked.m:g}")

clean = run(base)
hit = run(attacked)

###############################################################################
# Compare per-cooperator deliveries. The ratio is the attack's damage.

for name, r in (("no attack", clean), ("alpha", hit)):
    m = r.metrics
    print(f"{name:>10}: bits/ant {m.bits_delivered_per_cooperator:7.3f}  frac_delivered {m.frac_delivered:.3f}"
          f"  found food twice {m.second_find_fraction:.3f}")
print(f"reduction: {clean.metrics.bits_delivered_per_cooperator / max(hit.metrics.bits_delivered_per_cooperator, 1e-9):.0f}x")

###############################################################################
# When did the trapped cooperators get their only food? Most of them found
# it early, having left the nest before the misleading ring around it grew
# dense.

first = hit.first_collect_step[hit.first_collect_step >= 0]
for q in (10, 50, 90):
    print(f"{q}% of first pickups happened by step {int(np.percentile(first, q))}")
