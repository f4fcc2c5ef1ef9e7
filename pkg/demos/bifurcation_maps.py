#!/usr/bin/env python3
"""Bifurcation structure of the ecological model in (d, r2) and along d.

Produces two figures:

* a 150x150 map of the interior-equilibrium count over the death rate d and
  the parasite background growth rate r2 (no interior states above the line
  d = r2 + e a K1 / (1 + a h K1), where the host-only state is globally
  stable);
* a slice at r2 = 0.25 showing each interior root's host density colored by
  stability class, with the window where a complex eigenvalue pair of the
  smallest root crosses the imaginary axis.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.colors as mcolors
import matplotlib.pyplot as plt
import numpy as np

from coevo import Axis, EcoParams, SweepGrid, sweep1d, sweep2d

base = EcoParams(r1=1.0, r2=0.25, K1=1.0, K2=1.0, a=5.0, h=4.0, e=0.9, d=0.3)

grid = SweepGrid(base, (Axis("d", 0.01, 1.5, 150), Axis("r2", 0.01, 1.5, 150)))
res = sweep2d(grid)
counts = np.array([r[2] for r in res.rows]).reshape(150, 150)

fig, ax = plt.subplots(figsize=(5.8, 5))
cmap = mcolors.ListedColormap(["white", "black", "tab:blue", "tab:red"])
im = ax.pcolormesh(grid.axes[0].values(), grid.axes[1].values(), counts.T,
                   cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
r2v = grid.axes[1].values()
line = r2v + base.e * base.a * base.K1 / (1 + base.a * base.h * base.K1)
ax.plot(line, r2v, "k-", lw=1.5)
ax.set_xlabel("parasite death rate d")
ax.set_ylabel("parasite background growth r2")
ax.set_xlim(0.01, 1.5)
cb = fig.colorbar(im, ticks=[0, 1, 2, 3])
cb.set_label("number of interior equilibria")
fig.tight_layout()
fig.savefig("interior_count_map.png", dpi=150)
print("wrote interior_count_map.png")

grid1 = SweepGrid(base, (Axis("d", 0.01, 0.55, 217),))
res1 = sweep1d(grid1)
fig, ax = plt.subplots(figsize=(6.5, 4.2))
colors = {"stable_node": "tab:blue", "stable_focus": "tab:blue",
          "saddle": "tab:green", "source": "tab:red",
          "center_or_undetermined": "orange"}
for row in res1.rows:
    d, idx, x1, x2, cls, max_re = row
    if idx < 0:
        continue
    ax.plot(d, x1, ".", ms=3, color=colors.get(cls, "gray"))
for br in res1.extra["hopf_brackets"]:
    ax.axvspan(br["lo"], br["hi"], color="red", alpha=0.6)
    print(f"complex-pair real part changes sign in "
          f"[{br['lo']:.5f}, {br['hi']:.5f}] near x1 = {br['x1_near']:.4f}")
ax.set_xlabel("parasite death rate d (r2 = 0.25)")
ax.set_ylabel("interior root x1")
fig.tight_layout()
fig.savefig("interior_roots_along_d.png", dpi=150)
print("wrote interior_roots_along_d.png")
