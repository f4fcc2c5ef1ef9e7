#!/usr/bin/env python3
"""Fixed-trait ecology walkthrough: nullclines, equilibria, conditions.

The bistable reference parameter set (facultative parasite, d < r2) has a
stable parasite-only state at (0, 0.26) and a stable coexistence state at
(0.5428, 1.0841) separated by a saddle. The script plots both nullclines
with the classified equilibria and prints the analytic condition report.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coevo import (EcoParams, all_equilibria, condition_report,
                   consistency_check, interior_cubic, table3_summary)
from coevo.ecology import prey_nullcline, parasite_nullcline

p = EcoParams(r1=1.0, r2=0.25, K1=1.0, K2=1.0, a=5.0, h=4.0, e=0.9, d=0.185)

cubic = interior_cubic(p)
print(f"interaction cubic: c3={cubic.c3:g} c2={cubic.c2:g} "
      f"c1={cubic.c1:g} c0={cubic.c0:g}")
print(f"critical points: {cubic.xc1:.5f}, {cubic.xc2:.5f}\n")

print("equilibria:")
marker = {"stable_node": "o", "stable_focus": "o", "saddle": "s",
          "source": "^", "center_or_undetermined": "x"}
fig, ax = plt.subplots(figsize=(6, 4.5))
x1 = np.linspace(1e-4, p.K1 - 1e-4, 400)
ax.plot(x1, prey_nullcline(x1, p), label="host nullcline", color="tab:red")
ax.plot(x1, parasite_nullcline(x1, p), label="parasite nullcline",
        color="tab:blue")
for eq in all_equilibria(p):
    print(f"  {eq.kind:9s} ({eq.state[0]:.4f}, {eq.state[1]:.4f})  "
          f"{eq.stability.value}")
    color = "black" if eq.stable else "gray"
    ax.plot(*eq.state, marker[eq.stability.value], color=color, ms=9,
            mfc=color if eq.stable else "white")
ax.set_xlabel("host density x1")
ax.set_ylabel("parasite density x2")
ax.set_ylim(0, 2.2)
ax.legend()
fig.tight_layout()
fig.savefig("ecological_equilibria.png", dpi=150)
print("\nwrote ecological_equilibria.png")

check = consistency_check(p)
print(f"\nnullcline scan cross-check: ok={check.ok} "
      f"(polynomial {check.n_polynomial} roots vs scan {check.n_scan}, "
      f"max location error {check.max_location_error:.2e})")

rep = condition_report(p)
print("\nselected conditions:")
for name in ("facultative", "host_persistence", "parasite_persistence",
             "permanence", "e10_globally_stable", "e01_globally_stable",
             "interior_stable_sufficient"):
    c = rep.conditions[name]
    print(f"  {name:28s} {c.holds}")
print("\nfacultative/obligate outcome summary:")
for k, v in table3_summary(p).items():
    print(f"  {k:32s} {v}")
