"""Command-line interface.

Commands: equilibria, simulate, sweep1d, sweep2d, ess, report, recipes.
Every run validates its configuration strictly (unknown keys are rejected),
fills in defaults, and writes the fully resolved configuration next to its
outputs so any run can be reproduced from its artifacts alone.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .ecology import (boundary_equilibria, condition_report,
                      interior_equilibria, table3_summary)
from .evolution import (aligned_equilibria, boundary_evo_equilibria,
                        ess_check, ess_sufficient_conditions,
                        misaligned_interior_solve)
from .params import EcoParams, EvoConfig
from .recipes import recipes
from .simulate import SimSpec, StepUnderflowError, integrate
from .sweep import Axis, SweepGrid, resolve_workers, sweep1d, sweep2d
from .traits import TraitFamily

COMMANDS = ("equilibria", "simulate", "sweep1d", "sweep2d", "ess",
            "report", "recipes")

NUMERICS_DEFAULTS = {
    "rtol": 1e-8,
    "atol": 1e-10,
    "t_end": 1000.0,
    "max_rows": 200_000,
    "conv_tol": 1e-9,
    "max_step": None,
    "multistart": 21,
}

OUTPUT_DEFAULTS = {"dir": ".", "prefix": "run", "plot_script": False}


class ConfigError(ValueError):
    pass


def _reject_unknown(block: dict, allowed, where: str) -> None:
    extra = set(block) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def resolve_config(raw: dict) -> dict:
    """Validate a raw configuration and fill in every default."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    _reject_unknown(raw, ("model", "command", "numerics", "output", "seed"),
                    "config")
    cfg = {
        "model": copy.deepcopy(raw.get("model")),
        "command": copy.deepcopy(raw.get("command", {})),
        "numerics": dict(NUMERICS_DEFAULTS),
        "output": dict(OUTPUT_DEFAULTS),
        "seed": raw.get("seed"),
    }
    numerics = raw.get("numerics", {})
    _reject_unknown(numerics, NUMERICS_DEFAULTS, "numerics")
    cfg["numerics"].update(numerics)
    nm = cfg["numerics"]
    if not 1e-12 <= float(nm["rtol"]) <= 1e-3:
        raise ConfigError("numerics.rtol must lie in [1e-12, 1e-3]")
    if not float(nm["atol"]) > 0:
        raise ConfigError("numerics.atol must be > 0")
    if not float(nm["t_end"]) > 0:
        raise ConfigError("numerics.t_end must be > 0")
    if int(nm["max_rows"]) < 16:
        raise ConfigError("numerics.max_rows must be >= 16")
    output = raw.get("output", {})
    _reject_unknown(output, OUTPUT_DEFAULTS, "output")
    cfg["output"].update(output)
    cfg["output"]["dir"] = "."   # outputs live beside the resolved config

    command = cfg["command"]
    if not isinstance(command, dict) or "name" not in command:
        raise ConfigError("command block with a 'name' is required")
    if command["name"] not in COMMANDS:
        raise ConfigError(f"unknown command {command['name']!r}")
    allowed = {"equilibria": ("name",),
               "simulate": ("name", "y0"),
               "sweep1d": ("name", "axis"),
               "sweep2d": ("name", "axes"),
               "ess": ("name", "which"),
               "report": ("name",),
               "recipes": ("name",)}[command["name"]]
    _reject_unknown(command, allowed, "command")

    if command["name"] != "recipes":
        model = cfg["model"]
        if not isinstance(model, dict) or "kind" not in model:
            raise ConfigError("model block with kind 'eco' or 'evo' required")
        if model["kind"] == "eco":
            _reject_unknown(model, ("kind", "params"), "model")
            EcoParams.from_dict(model.get("params", {}))
        elif model["kind"] == "evo":
            _reject_unknown(model, ("kind", "eco", "traits",
                                    "sigma1_sq", "sigma2_sq"), "model")
            build_evo(model)
        else:
            raise ConfigError(f"unknown model kind {model['kind']!r}")
    return cfg


def build_eco(model: dict) -> EcoParams:
    return EcoParams.from_dict(model["params"])


def build_evo(model: dict) -> EvoConfig:
    eco = dict(model.get("eco", {}))
    _reject_unknown(eco, ("r1", "r2", "h", "e", "d"), "model.eco")
    data = {**eco,
            "sigma1_sq": model.get("sigma1_sq", 1.0),
            "sigma2_sq": model.get("sigma2_sq", 1.0),
            "traits": model.get("traits", {})}
    try:
        return EvoConfig.from_dict(data)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_model(model: dict):
    return build_eco(model) if model["kind"] == "eco" else build_evo(model)


def apply_set(raw: dict, assignments: List[str]) -> None:
    """Apply --set dotted.path=value overrides in place."""
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        node = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set path {key!r} crosses a non-object")
        node[parts[-1]] = parsed


def _dump(obj, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _collect_evo_equilibria(cfg: EvoConfig, which: str):
    out = []
    if which in ("all", "boundary"):
        out.extend(boundary_evo_equilibria(cfg))
    if cfg.traits.family is TraitFamily.GAUSSIAN:
        if which in ("all", "aligned"):
            seen = {(round(e.state[0], 9), round(e.state[1], 9), e.kind)
                    for e in out}
            for eq in aligned_equilibria(cfg):
                key = (round(eq.state[0], 9), round(eq.state[1], 9), eq.kind)
                if key not in seen:
                    out.append(eq)
        if which in ("all", "misaligned"):
            out.extend(misaligned_interior_solve(cfg))
    return out


def _plot_script(kind: str) -> str:
    if kind == "simulate":
        body = (
            "data = np.genfromtxt('trajectory.csv', delimiter=',', names=True)\n"
            "for name in data.dtype.names[1:]:\n"
            "    plt.plot(data['t'], data[name], label=name)\n"
            "plt.xlabel('time'); plt.legend(); plt.tight_layout()\n"
            "plt.savefig('trajectory.png', dpi=150)\n")
    elif kind == "sweep2d":
        body = (
            "data = np.genfromtxt('sweep2d.csv', delimiter=',', names=True)\n"
            "cols = data.dtype.names\n"
            "x, y, n = data[cols[0]], data[cols[1]], data['n_interior']\n"
            "nx, ny = len(set(x)), len(set(y))\n"
            "plt.pcolormesh(n.reshape(nx, ny).T, cmap='viridis')\n"
            "plt.xlabel(cols[0]); plt.ylabel(cols[1]); plt.colorbar()\n"
            "plt.savefig('sweep2d.png', dpi=150)\n")
    else:
        body = (
            "data = np.genfromtxt('sweep1d.csv', delimiter=',', names=True)\n"
            "cols = data.dtype.names\n"
            "plt.scatter(data[cols[0]], data['x1'], s=4,\n"
            "            c=np.sign(data['max_re_lambda']), cmap='coolwarm')\n"
            "plt.xlabel(cols[0]); plt.ylabel('x1'); plt.tight_layout()\n"
            "plt.savefig('sweep1d.png', dpi=150)\n")
    return ("#!/usr/bin/env python3\n"
            "import os\n"
            "os.chdir(os.path.dirname(os.path.abspath(__file__)) or '.')\n"
            "import numpy as np\n"
            "import matplotlib\n"
            "matplotlib.use('Agg')\n"
            "import matplotlib.pyplot as plt\n\n" + body)


def run(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="coevo",
        description="Host-parasite eco-evolutionary model toolkit")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=str, help="JSON run configuration")
    parser.add_argument("--recipe", type=str,
                        help="start from a named recipe configuration")
    parser.add_argument("--set", action="append", default=[], dest="sets",
                        metavar="KEY=VALUE", help="override a config entry")
    parser.add_argument("--out", type=str, default=".",
                        help="output directory")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel workers for sweeps "
                             "(default: COEVO_WORKERS or 1)")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; the pipeline is deterministic")
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)

    try:
        raw: dict = {}
        if args.recipe:
            cat = recipes()
            if args.recipe not in cat:
                raise ConfigError(f"unknown recipe {args.recipe!r}; "
                                  f"known: {', '.join(sorted(cat))}")
            raw = copy.deepcopy(cat[args.recipe])
        if args.config:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
            if raw:
                for key, value in file_cfg.items():
                    raw[key] = value
            else:
                raw = file_cfg
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        # the CLI-typed command wins; an unrelated command block is replaced
        cmd_block = raw.get("command")
        if not isinstance(cmd_block, dict) or cmd_block.get("name") != args.command:
            raw["command"] = {"name": args.command}
        apply_set(raw, args.sets)
        if args.seed is not None:
            raw["seed"] = args.seed
        cfg = resolve_config(raw)
    except (ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "recipes":
        for name, entry in sorted(recipes().items()):
            model = entry.get("model", {})
            kind = model.get("kind", "?")
            print(f"{name:24s} {entry['command']['name']:9s} model={kind}")
        return 0

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = resolve_workers(args.workers)

    try:
        return _execute(cfg, out_dir, workers)
    except StepUnderflowError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def _execute(cfg: dict, out_dir: Path, workers: int) -> int:
    name = cfg["command"]["name"]
    numerics = cfg["numerics"]
    _dump(cfg, out_dir / "run_config.json")

    if name == "equilibria":
        model = build_model(cfg["model"])
        if isinstance(model, EcoParams):
            eqs = boundary_equilibria(model) + interior_equilibria(model)
            payload = [e.to_dict() for e in eqs]
        else:
            payload = [e.to_dict()
                       for e in _collect_evo_equilibria(model, "all")]
        _dump(payload, out_dir / "equilibria.json")
        print(f"{len(payload)} equilibria -> {out_dir / 'equilibria.json'}")
        for e in payload:
            state = ", ".join(f"{v:.6g}" for v in e["state"])
            print(f"  {e['kind']:20s} ({state})  {e['stability']}")
        return 0

    if name == "report":
        model = build_model(cfg["model"])
        if isinstance(model, EcoParams):
            payload = condition_report(model).to_dict()
            payload["table3"] = table3_summary(model)
        else:
            eq = next((e for e in aligned_equilibria(model)
                       if e.kind == "INTERIOR_ALIGNED" and e.cs), None) \
                if model.traits.family is TraitFamily.GAUSSIAN else None
            payload = ess_sufficient_conditions(model, eq).to_dict()
        _dump(payload, out_dir / "report.json")
        n_true = sum(1 for c in payload["conditions"].values() if c["holds"])
        print(f"report: {n_true}/{len(payload['conditions'])} conditions hold "
              f"-> {out_dir / 'report.json'}")
        return 0

    if name == "simulate":
        model = build_model(cfg["model"])
        spec = SimSpec(
            y0=tuple(cfg["command"].get("y0", (0.5, 0.5))),
            t_end=float(numerics["t_end"]),
            rtol=float(numerics["rtol"]), atol=float(numerics["atol"]),
            max_step=(math.inf if numerics["max_step"] is None
                      else float(numerics["max_step"])),
            max_rows=int(numerics["max_rows"]),
            conv_tol=float(numerics["conv_tol"]))
        traj = integrate(spec, model)
        traj.to_csv(out_dir / "trajectory.csv")
        traj.meta["resolved_config"] = cfg
        traj.write_sidecar(out_dir / "trajectory.json")
        if cfg["output"]["plot_script"]:
            (out_dir / "plot.py").write_text(_plot_script("simulate"))
        ev = traj.terminal
        extra = ""
        if ev.kind == "CONVERGED":
            extra = " at (" + ", ".join(f"{v:.6g}" for v in ev.state) + ")"
        elif ev.kind == "OSCILLATING":
            extra = f" period~{ev.period:.4g}"
        print(f"simulate: {len(traj.times)} rows, terminal {ev.kind}{extra}")
        return 0

    if name in ("sweep1d", "sweep2d"):
        model = build_model(cfg["model"])
        if not isinstance(model, EcoParams):
            print("config error: sweeps require an eco model", file=sys.stderr)
            return 2
        if name == "sweep1d":
            ax = cfg["command"].get("axis")
            if not ax:
                print("config error: sweep1d needs command.axis",
                      file=sys.stderr)
                return 2
            grid = SweepGrid(model, (Axis(**ax),))
            res = sweep1d(grid, workers=workers)
        else:
            axes = cfg["command"].get("axes")
            if not axes or len(axes) != 2:
                print("config error: sweep2d needs command.axes (two)",
                      file=sys.stderr)
                return 2
            grid = SweepGrid(model, tuple(Axis(**a) for a in axes))
            res = sweep2d(grid, workers=workers)
        res.extra["resolved_config"] = cfg
        res.to_csv(out_dir / f"{name}.csv")
        res.write_metadata(out_dir / f"{name}_metadata.json")
        if cfg["output"]["plot_script"]:
            (out_dir / "plot.py").write_text(_plot_script(name))
        print(f"{name}: {len(res.rows)} rows -> {out_dir / (name + '.csv')}")
        if name == "sweep1d":
            for br in res.extra.get("hopf_brackets", []):
                print(f"  complex-pair real part crosses zero in "
                      f"[{br['lo']:.6g}, {br['hi']:.6g}] near x1={br['x1_near']:.4g}")
        return 0

    if name == "ess":
        model = build_model(cfg["model"])
        if isinstance(model, EcoParams):
            print("config error: ess requires an evo model", file=sys.stderr)
            return 2
        which = cfg["command"].get("which", "all")
        if which not in ("all", "boundary", "aligned", "misaligned"):
            print(f"config error: unknown ess scope {which!r}", file=sys.stderr)
            return 2
        eqs = _collect_evo_equilibria(model, which)
        payload = []
        for eq in eqs:
            eq.ess = ess_check(eq, model)
            payload.append(eq.to_dict())
        _dump(payload, out_dir / "ess.json")
        print(f"ess: {len(payload)} equilibria -> {out_dir / 'ess.json'}")
        for e in payload:
            state = ", ".join(f"{v:.4g}" for v in e["state"])
            verdict = e["ess"]
            print(f"  {e['kind']:20s} ({state}) CS={e['cs']} "
                  f"ESS={verdict['ess']}")
        return 0

    raise AssertionError(f"unhandled command {name}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
