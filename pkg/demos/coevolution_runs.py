#!/usr/bin/env python3
"""Long-run co-evolutionary simulations across the efficiency width sigma_a.

With all other parameters fixed in the bistable ecological regime, the
width of the parasitism-efficiency kernel controls the outcome:

* wide kernels (sigma_a = 2, 1): the populations converge to coexistence
  states with displaced traits -- evolution rescues the host, which the
  frozen-trait ecology would have driven extinct from this initial state;
* sigma_a = 0.5: convergence to coexistence with both traits at the peak;
* narrow kernels (sigma_a = 0.15, 0.05): sustained oscillations; the
  host/parasite peak timing flips from crash-synchronized pulses to clean
  anti-phase cycles;
* sigma_a = 0.005: recurrent trait-chase bursts (the aligned coexistence
  state is transversally unstable, so the bursting never settles).
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from coevo import SimSpec, integrate, phase_metrics
from coevo.cli import build_evo
from coevo.recipes import recipes

TAGS = ["2", "1", "05", "015", "005", "0005"]

fig, axes = plt.subplots(3, 2, figsize=(11, 9))
for ax, tag in zip(axes.flat, TAGS):
    recipe = recipes()[f"sec42_sigma{tag}"]
    cfg = build_evo(recipe["model"])
    nm = recipe["numerics"]
    spec = SimSpec(y0=tuple(recipe["command"]["y0"]), t_end=nm["t_end"],
                   rtol=nm["rtol"], atol=nm["atol"])
    traj = integrate(spec, cfg)
    ev = traj.terminal
    line = f"sigma_a={cfg.traits.sigma_a}: {ev.kind}"
    if ev.kind == "CONVERGED":
        line += " at (" + ", ".join(f"{v:.4f}" for v in ev.state) + ")"
    elif ev.kind == "OSCILLATING":
        pm = phase_metrics(traj)
        line += (f", period {pm.period:.1f}, peak lag {pm.lag_fraction:.2f}"
                 f" / trough lag {pm.lag_trough:.2f} of a period")
    print(line)
    show = traj.times <= min(2000.0, traj.times[-1])
    for k, (label, color) in enumerate(
            [("x1", "tab:red"), ("x2", "tab:blue"),
             ("u1", "tab:green"), ("u2", "tab:cyan")]):
        ax.plot(traj.times[show], traj.states[show, k], color=color,
                lw=0.8, label=label)
    ax.set_title(f"sigma_a = {cfg.traits.sigma_a} ({ev.kind.lower()})",
                 fontsize=10)
    ax.set_xlabel("time")
axes[0, 0].legend(ncol=4, fontsize=8)
fig.tight_layout()
fig.savefig("coevolution_runs.png", dpi=150)
print("wrote coevolution_runs.png")

# host-parasite cycle shapes for the two oscillating regimes
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for ax, tag in zip(axes, ["015", "005"]):
    recipe = recipes()[f"sec42_sigma{tag}"]
    cfg = build_evo(recipe["model"])
    nm = recipe["numerics"]
    spec = SimSpec(y0=tuple(recipe["command"]["y0"]), t_end=nm["t_end"],
                   rtol=nm["rtol"], atol=nm["atol"])
    traj = integrate(spec, cfg)
    half = len(traj.times) // 2
    ax.plot(traj.states[half:, 0], traj.states[half:, 1], lw=0.6)
    ax.set_xlabel("host x1")
    ax.set_ylabel("parasite x2")
    ax.set_title(f"sigma_a = {cfg.traits.sigma_a}")
fig.tight_layout()
fig.savefig("host_parasite_cycles.png", dpi=150)
print("wrote host_parasite_cycles.png")
