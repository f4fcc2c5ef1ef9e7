#!/usr/bin/env python3
"""Fitness landscapes at convergence-stable boundary states.

With a trait-dependent parasite death rate the host-only and parasite-only
states can be simultaneously convergence stable at different trait pairs.
This script plots each species' fitness as a function of a mutant trait at
both states. The host's landscape peaks at the resident trait (value 0),
but the parasite has mutant traits with positive fitness at the host-only
state: that strategy resists invasion dynamics yet fails the
evolutionarily-stable-strategy maximum principle.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coevo import boundary_evo_equilibria, ess_check, fitness_g1, fitness_g2
from coevo.cli import build_evo
from coevo.recipes import recipes

cfg = build_evo(recipes()["sec412_cs_not_ess"]["model"])
c = cfg.traits.c
eqs = [eq for eq in boundary_evo_equilibria(cfg) if eq.cs]

fig, axes = plt.subplots(len(eqs), 2, figsize=(9, 3.2 * len(eqs)))
v = np.linspace(0.0, c, 400)
for row, eq in enumerate(eqs):
    x = eq.state[:2]
    u = eq.state[2:]
    verdict = ess_check(eq, cfg)
    print(f"{eq.kind}: x*=({x[0]:.4g}, {x[1]:.4g}) u*=({u[0]:g}, {u[1]:g}) "
          f"CS={eq.cs} ESS={verdict.ess} "
          f"max G1={verdict.species[0].max_value:+.4g} "
          f"max G2={verdict.species[1].max_value:+.4g}")
    g1 = [fitness_g1(vi, u, x, cfg) for vi in v]
    g2 = [fitness_g2(vi, u, x, cfg) for vi in v]
    for col, (g, label, resident) in enumerate(
            [(g1, "host fitness G1(v1)", u[0]),
             (g2, "parasite fitness G2(v2)", u[1])]):
        ax = axes[row, col]
        ax.plot(v, g, lw=1.5)
        ax.axhline(0.0, color="gray", lw=0.8)
        ax.axvline(resident, color="tab:red", lw=0.8, ls="--",
                   label="resident trait")
        ax.set_title(f"{eq.kind}: {label}")
        ax.set_xlabel("mutant trait v")
        ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("fitness_landscapes.png", dpi=150)
print("wrote fitness_landscapes.png")
