"""Deterministic parameter sweeps over the ecological model.

Cells are evaluated independently (embarrassingly parallel); results are
gathered by cell index so the output is row-major and bit-identical for any
worker count.  Per-cell failures become NaN rows instead of aborting.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import __version__ as _version
from .ecology import interior_equilibria
from .params import EcoParams


@dataclass(frozen=True)
class Axis:
    """One linearly spaced sweep axis over an EcoParams field."""

    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self) -> None:
        if self.name not in EcoParams.__dataclass_fields__:
            raise ValueError(f"unknown parameter {self.name!r}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not self.hi > self.lo:
            raise ValueError("axis requires hi > lo")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def to_dict(self) -> dict:
        return {"name": self.name, "lo": self.lo, "hi": self.hi,
                "count": self.count}


@dataclass(frozen=True)
class SweepGrid:
    base: EcoParams
    axes: Tuple[Axis, ...]

    def __post_init__(self) -> None:
        if len(self.axes) not in (1, 2):
            raise ValueError("sweeps support one or two axes")

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(),
                "axes": [ax.to_dict() for ax in self.axes]}


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get("COEVO_WORKERS", "1"))
    return max(1, workers)


def _above_line(p: EcoParams) -> bool:
    return p.d > p.r2 + p.e * p.a * p.K1 / (1.0 + p.a * p.h * p.K1)


def _cell2d(args) -> Tuple[float, float, float, bool, bool]:
    base_dict, name0, v0, name1, v1 = args
    try:
        p = EcoParams.from_dict({**base_dict, name0: v0, name1: v1})
        n = float(len(interior_equilibria(p)))
        return (v0, v1, n, p.facultative, _above_line(p))
    except Exception:
        return (v0, v1, math.nan, False, False)


def _cell1d(args) -> List[Tuple[float, int, float, float, str, float]]:
    base_dict, name, v = args
    try:
        p = EcoParams.from_dict({**base_dict, name: v})
        rows = []
        for i, eq in enumerate(interior_equilibria(p)):
            max_re = max(z.real for z in eq.eigenvalues)
            rows.append((v, i, eq.state[0], eq.state[1],
                         eq.stability.value, max_re))
        if not rows:
            rows.append((v, -1, math.nan, math.nan, "none", math.nan))
        return rows
    except Exception:
        return [(v, -1, math.nan, math.nan, "error", math.nan)]


def _pmap(fun, jobs, workers: int):
    if workers <= 1:
        return [fun(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(jobs) // (workers * 8))
        return list(pool.map(fun, jobs, chunksize=chunk))


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


@dataclass
class SweepResult:
    grid: SweepGrid
    columns: List[str]
    rows: List[tuple]
    workers: int
    extra: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")

    def metadata(self) -> dict:
        return {"grid": self.grid.to_dict(), "columns": self.columns,
                "n_rows": len(self.rows), "tool_version": _version,
                **self.extra}

    def write_metadata(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.metadata(), fh, indent=2)
            fh.write("\n")


def sweep2d(grid: SweepGrid, workers: Optional[int] = None) -> SweepResult:
    """Interior-equilibrium counts over a 2-D parameter grid.

    Row-major over (axis0, axis1).  Columns: the two axis names, the number
    of interior equilibria, and flags for a facultative parasite (r2 > d)
    and for lying above the parasite-extinction line
    d = r2 + e a K1/(1 + a h K1).
    """
    if len(grid.axes) != 2:
        raise ValueError("sweep2d needs exactly two axes")
    ax0, ax1 = grid.axes
    workers = resolve_workers(workers)
    base = grid.base.to_dict()
    jobs = [(base, ax0.name, float(v0), ax1.name, float(v1))
            for v0 in ax0.values() for v1 in ax1.values()]
    rows = _pmap(_cell2d, jobs, workers)
    cols = [ax0.name, ax1.name, "n_interior", "facultative", "above_line"]
    return SweepResult(grid=grid, columns=cols, rows=rows, workers=workers,
                       extra={"kind": "sweep2d"})


def sweep1d(grid: SweepGrid, workers: Optional[int] = None,
            hopf_bracket_width: float = 1e-4) -> SweepResult:
    """Interior roots and classes along one parameter axis.

    Emits one row per interior root per axis value (root_index ordered by
    x1) plus the root's largest eigenvalue real part.  Sign changes of the
    real part of complex eigenvalue pairs between adjacent axis values are
    bisected to ``hopf_bracket_width`` and reported in the metadata.
    """
    if len(grid.axes) != 1:
        raise ValueError("sweep1d needs exactly one axis")
    ax = grid.axes[0]
    workers = resolve_workers(workers)
    base = grid.base.to_dict()
    jobs = [(base, ax.name, float(v)) for v in ax.values()]
    chunks = _pmap(_cell1d, jobs, workers)
    rows = [r for chunk in chunks for r in chunk]
    brackets = _hopf_brackets(grid.base, ax, chunks, hopf_bracket_width)
    cols = [ax.name, "root_index", "x1", "x2", "class", "max_re_lambda"]
    return SweepResult(grid=grid, columns=cols, rows=rows, workers=workers,
                       extra={"kind": "sweep1d", "hopf_brackets": brackets})


def _cubic_signs(p: EcoParams) -> Tuple[float, float]:
    """Signs of c0 and of the cubic discriminant (zero at multiple roots)."""
    from .ecology import DegenerateInteractionError, interior_cubic
    try:
        c = interior_cubic(p)
    except DegenerateInteractionError:
        return 0.0, 0.0
    disc = (18.0 * c.c3 * c.c2 * c.c1 * c.c0 - 4.0 * c.c2 ** 3 * c.c0
            + c.c2 ** 2 * c.c1 ** 2 - 4.0 * c.c3 * c.c1 ** 3
            - 27.0 * c.c3 ** 2 * c.c0 ** 2)
    return math.copysign(1.0, c.c0), math.copysign(1.0, disc)


def count_jump_anomalies(res: SweepResult) -> List[dict]:
    """Adjacent 2-D cells whose interior count jumps by 2+ unexplained.

    A jump of two roots is expected only across the c0 = 0 curve or a zero
    of the cubic discriminant (where root pairs are born or die); any other
    jump is flagged as a candidate for grid refinement.
    """
    if res.extra.get("kind") != "sweep2d":
        raise ValueError("count_jump_anomalies applies to sweep2d results")
    ax0, ax1 = res.grid.axes
    n0, n1 = ax0.count, ax1.count
    base = res.grid.base
    out: List[dict] = []
    sign_cache: dict = {}

    def signs(i, j):
        if (i, j) not in sign_cache:
            row = res.rows[i * n1 + j]
            p = base.replaced(**{ax0.name: float(row[0]),
                                 ax1.name: float(row[1])})
            sign_cache[(i, j)] = _cubic_signs(p)
        return sign_cache[(i, j)]

    def check(i0, j0, i1, j1):
        a, b = res.rows[i0 * n1 + j0], res.rows[i1 * n1 + j1]
        if math.isnan(a[2]) or math.isnan(b[2]):
            return
        if abs(a[2] - b[2]) < 2:
            return
        s_a, s_b = signs(i0, j0), signs(i1, j1)
        if s_a[0] != s_b[0] or s_a[1] != s_b[1]:
            return
        out.append({"cells": [(a[0], a[1]), (b[0], b[1])],
                    "counts": [a[2], b[2]]})

    for i in range(n0):
        for j in range(n1):
            if i + 1 < n0:
                check(i, j, i + 1, j)
            if j + 1 < n1:
                check(i, j, i, j + 1)
    return out


def _complex_pair_re(p: EcoParams, x1_guess: float) -> Optional[float]:
    """Re of the complex eigenvalue pair of the root nearest x1_guess."""
    eqs = interior_equilibria(p)
    if not eqs:
        return None
    eq = min(eqs, key=lambda e: abs(e.state[0] - x1_guess))
    if abs(eq.state[0] - x1_guess) > 0.25 * p.K1:
        return None
    ev = eq.eigenvalues
    if abs(ev[0].imag) < 1e-12:
        return None
    return max(z.real for z in ev)


def _hopf_brackets(base: EcoParams, ax: Axis, chunks, width: float) -> List[dict]:
    values = ax.values()
    out: List[dict] = []
    for i in range(len(values) - 1):
        lo_rows = [r for r in chunks[i] if r[1] >= 0]
        for row in lo_rows:
            v_lo, _, x1_lo = row[0], row[1], row[2]
            re_lo = row[5]
            if math.isnan(x1_lo):
                continue
            # matched root at the next axis value
            cand = [r for r in chunks[i + 1] if r[1] >= 0
                    and not math.isnan(r[2])
                    and abs(r[2] - x1_lo) < 0.25 * base.K1]
            if not cand:
                continue
            nxt = min(cand, key=lambda r: abs(r[2] - x1_lo))
            re_hi = nxt[5]
            # require a complex pair on both sides and a real-part sign change
            p_lo = base.replaced(**{ax.name: float(values[i])})
            p_hi = base.replaced(**{ax.name: float(values[i + 1])})
            c_lo = _complex_pair_re(p_lo, x1_lo)
            c_hi = _complex_pair_re(p_hi, nxt[2])
            if c_lo is None or c_hi is None or c_lo * c_hi >= 0:
                continue
            lo, hi = float(values[i]), float(values[i + 1])
            x_guess = x1_lo
            f_lo = c_lo
            while hi - lo > width:
                mid = 0.5 * (lo + hi)
                f_mid = _complex_pair_re(base.replaced(**{ax.name: mid}), x_guess)
                if f_mid is None:
                    break
                if f_lo * f_mid <= 0:
                    hi = mid
                else:
                    lo, f_lo = mid, f_mid
                eqs = interior_equilibria(base.replaced(**{ax.name: mid}))
                if eqs:
                    x_guess = min(eqs, key=lambda e: abs(e.state[0] - x_guess)
                                  ).state[0]
            out.append({"axis": ax.name, "lo": lo, "hi": hi,
                        "x1_near": x_guess})
    return out
