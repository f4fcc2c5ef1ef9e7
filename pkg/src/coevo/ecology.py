"""Equilibria and analytic conditions of the fixed-trait ecological model.

Interior equilibria are the intersections of the two nullclines

    x2 = f(x1) = r1 (K1 - x1)(1 + a h x1) / (a K1)        (host)
    x2 = g(x1) = (K2/r2) [e a x1/(1 + h a x1) + (r2 - d)]  (parasite)

on 0 < x1 < K1 with x2 > 0.  Clearing denominators turns ``g - f = 0`` into
a cubic F(x1) = c3 x1^3 + c2 x1^2 + c1 x1 + c0 whose coefficients carry the
whole existence story; the cubic is solved by companion-matrix eigenvalues
and polished by Newton steps.  A brute-force nullcline sign scan serves as
an independent cross-check (:func:`consistency_check`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .params import EcoParams
from .stability import Equilibrium, classify_eigenvalues

ROOT_EDGE = 1e-10          # acceptance window is (ROOT_EDGE, K1 - ROOT_EDGE)
ROOT_MERGE_REL = 1e-7      # roots closer than this * K1 merge as multiple


class DegenerateInteractionError(ValueError):
    """The interaction cubic degenerates (a = 0 or h = 0)."""


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of F(x1) and, when real, its critical points."""

    c3: float
    c2: float
    c1: float
    c0: float
    xc1: Optional[float] = None
    xc2: Optional[float] = None

    def __call__(self, x1: float) -> float:
        return ((self.c3 * x1 + self.c2) * x1 + self.c1) * x1 + self.c0

    def derivative(self, x1: float) -> float:
        return (3.0 * self.c3 * x1 + 2.0 * self.c2) * x1 + self.c1


def interior_cubic(p: EcoParams) -> CubicCoeffs:
    """Cubic whose roots in (0, K1) are the interior-equilibrium abscissae."""
    if p.a == 0.0 or p.h == 0.0:
        raise DegenerateInteractionError(
            "cubic degenerates for a = 0 or h = 0; use interior_equilibria"
        )
    r1, r2, K1, K2, a, h, e, d = (p.r1, p.r2, p.K1, p.K2, p.a, p.h, p.e, p.d)
    c3 = r1 * r2 * (a * h) ** 2
    c2 = a * h * r1 * r2 * (2.0 - a * h * K1)
    c1 = a * a * h * K1 * K2 * (r2 + e / h - d) + r1 * r2 * (1.0 - 2.0 * a * h * K1)
    c0 = a * r2 * K1 * (K2 * (1.0 - d / r2) - r1 / a) if r2 > 0 else -r1 * r2 * K1 - a * d * K1 * K2
    disc = c2 * c2 - 3.0 * c1 * c3
    if disc >= 0.0 and c3 != 0.0:
        root = math.sqrt(disc)
        return CubicCoeffs(c3, c2, c1, c0,
                           xc1=(-c2 - root) / (3.0 * c3),
                           xc2=(-c2 + root) / (3.0 * c3))
    return CubicCoeffs(c3, c2, c1, c0)


def prey_nullcline(x1: float, p: EcoParams) -> float:
    """x2 = f(x1) on 0 <= x1 <= K1 (requires a > 0)."""
    return p.r1 * (p.K1 - x1) * (1.0 + p.a * p.h * x1) / (p.a * p.K1)


def parasite_nullcline(x1: float, p: EcoParams) -> float:
    """x2 = g(x1) (requires a > 0 and r2 > 0)."""
    return p.K2 / p.r2 * (p.e * p.a * x1 / (1.0 + p.h * p.a * x1)
                          + (p.r2 - p.d))


def eco_jacobian(x: Tuple[float, float], p: EcoParams) -> np.ndarray:
    """Jacobian of the ecological vector field at an arbitrary state."""
    x1, x2 = x
    s = 1.0 + p.a * p.h * x1
    H1 = p.r1 * (1.0 - x1 / p.K1) - p.a * x2 / s
    H2 = p.e * p.a * x1 / s - p.d + p.r2 * (1.0 - x2 / p.K2)
    j11 = H1 + x1 * (-p.r1 / p.K1 + p.h * p.a * p.a * x2 / (s * s))
    j12 = -p.a * x1 / s
    j21 = x2 * p.e * p.a / (s * s)
    j22 = H2 - x2 * p.r2 / p.K2
    return np.array([[j11, j12], [j21, j22]])


def _make_equilibrium(state, kind, eigenvalues, multiplicity=1, notes=""):
    return Equilibrium(state=tuple(float(v) for v in state), kind=kind,
                       eigenvalues=tuple(complex(z) for z in eigenvalues),
                       stability=classify_eigenvalues(eigenvalues),
                       multiplicity=multiplicity, notes=notes)


def boundary_equilibria(p: EcoParams) -> List[Equilibrium]:
    """E00, E10 and (when r2 > d) E01, classified by analytic eigenvalues."""
    out = [
        _make_equilibrium((0.0, 0.0), "E00", (p.r1, p.r2 - p.d)),
        _make_equilibrium((p.K1, 0.0), "E10",
                          (-p.r1, p.r2 - p.d + p.holling_at(p.K1) * p.e)),
    ]
    if p.r2 > p.d:
        x2 = p.K2 * (1.0 - p.d / p.r2)
        out.append(_make_equilibrium(
            (0.0, x2), "E01", (p.r1 - p.a * x2, p.d - p.r2)))
    return out


def _interior_roots_direct(p: EcoParams) -> List[float]:
    """Interior abscissae for the degenerate cases a = 0, h = 0 or r2 = 0."""
    if p.a == 0.0:
        return []  # decoupled system: no interaction-driven equilibria
    if p.r2 == 0.0:
        # parasite nullcline is vertical: e a x1/(1 + h a x1) = d
        if p.d == 0.0 or p.e <= p.h * p.d:
            return []
        x1 = p.d / (p.a * (p.e - p.h * p.d))
        return [x1]
    # h = 0: g - f is linear in x1
    # r1 (K1 - x1)/(a K1) = (K2/r2)(e a x1 + r2 - d)
    denom = p.r1 / (p.a * p.K1) + p.K2 * p.e * p.a / p.r2
    x1 = (p.r1 / p.a - p.K2 * (1.0 - p.d / p.r2)) / denom
    return [x1]


def interior_equilibria(p: EcoParams) -> List[Equilibrium]:
    """All interior equilibria, classified by the interior Jacobian."""
    try:
        cubic = interior_cubic(p)
    except DegenerateInteractionError:
        roots = _interior_roots_direct(p)
    else:
        if p.r2 == 0.0:
            roots = _interior_roots_direct(p)
        else:
            poly = np.array([cubic.c3, cubic.c2, cubic.c1, cubic.c0])
            rr = np.roots(poly)
            scale = max(1.0, abs(cubic.c0))
            roots = []
            for z in rr:
                if abs(z.imag) > 1e-7 * max(1.0, abs(z.real)):
                    continue
                x = float(z.real)
                # Newton polish against the exact cubic
                for _ in range(3):
                    fx = cubic(x)
                    if abs(fx) < 1e-12 * scale:
                        break
                    dfx = cubic.derivative(x)
                    if dfx == 0.0:
                        break
                    x -= fx / dfx
                roots.append(x)
    accepted = sorted(x for x in roots
                      if ROOT_EDGE < x < p.K1 - ROOT_EDGE)
    merged: List[Tuple[float, int]] = []
    for x in accepted:
        if merged and abs(x - merged[-1][0]) < ROOT_MERGE_REL * p.K1:
            x0, m = merged[-1]
            merged[-1] = ((x0 * m + x) / (m + 1), m + 1)
        else:
            merged.append((x, 1))
    out = []
    for x1, mult in merged:
        x2 = prey_nullcline(x1, p)
        if x2 <= 0.0:
            continue
        ev = np.linalg.eigvals(eco_jacobian((x1, x2), p))
        notes = "multiple root" if mult > 1 else ""
        out.append(_make_equilibrium((x1, x2), "INTERIOR", ev,
                                     multiplicity=mult, notes=notes))
    return out


def all_equilibria(p: EcoParams) -> List[Equilibrium]:
    return boundary_equilibria(p) + interior_equilibria(p)


# ---------------------------------------------------------------------------
# analytic conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Condition:
    """One machine-checked inequality (or combination of named ones)."""

    name: str
    relation: str                 # "lt", "gt", "all", "any"
    holds: bool
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    of: Tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "relation": self.relation, "holds": self.holds}
        if self.relation in ("lt", "gt"):
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
        else:
            out["of"] = list(self.of)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ConditionReport:
    """Named verdicts for persistence, permanence and stability conditions."""

    params: EcoParams
    conditions: Dict[str, Condition] = field(default_factory=dict)

    def _cmp(self, name: str, lhs: float, rhs: float, relation: str,
             note: str = "") -> None:
        if relation == "lt":
            holds = bool(lhs < rhs)
        elif relation == "gt":
            holds = bool(lhs > rhs)
        else:
            raise ValueError(relation)
        if math.isnan(lhs) or math.isnan(rhs):
            holds = False
            note = (note + "; " if note else "") + "undefined side"
        self.conditions[name] = Condition(name, relation, holds,
                                          lhs=float(lhs), rhs=float(rhs),
                                          note=note)

    def _combo(self, name: str, relation: str, of: Tuple[str, ...],
               note: str = "") -> None:
        values = [self.conditions[n].holds for n in of]
        holds = all(values) if relation == "all" else any(values)
        self.conditions[name] = Condition(name, relation, holds, of=of,
                                          note=note)

    def holds(self, name: str) -> bool:
        return self.conditions[name].holds

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "conditions": {k: c.to_dict() for k, c in self.conditions.items()},
        }


def condition_report(p: EcoParams) -> ConditionReport:
    """Evaluate every analytic persistence/stability condition numerically."""
    rep = ConditionReport(p)
    r1, r2, K1, K2, a, h, e, d = (p.r1, p.r2, p.K1, p.K2, p.a, p.h, p.e, p.d)
    inf = float("inf")
    gain_K1 = e * a * K1 / (1.0 + a * h * K1)      # parasitism gain at x1 = K1
    k2eff = K2 * (1.0 - d / r2) if r2 > 0 else -inf  # E01 parasite level
    r1_over_a = r1 / a if a > 0 else inf

    rep._cmp("facultative", r2, d, "gt")
    rep._cmp("host_persistence_obligate", d, r2, "gt")
    rep._cmp("host_persistence_fac_upper", r1_over_a, k2eff, "gt")
    rep._cmp("host_persistence_fac_positive", k2eff, 0.0, "gt")
    rep._combo("host_persistence_facultative", "all",
               ("host_persistence_fac_upper", "host_persistence_fac_positive"))
    rep._combo("host_persistence", "any",
               ("host_persistence_obligate", "host_persistence_facultative"))

    rep._cmp("parasite_persistence", r2 + gain_K1, d, "gt")

    rep._combo("permanence_obligate_window", "all",
               ("parasite_persistence", "host_persistence_obligate"))
    rep._combo("permanence_facultative", "all",
               ("host_persistence_fac_upper", "host_persistence_fac_positive"))
    rep._combo("permanence", "any",
               ("permanence_obligate_window", "permanence_facultative"))

    rep._cmp("e10_globally_stable", d, r2 + gain_K1, "gt")

    rep._cmp("e01_precondition", r1_over_a, k2eff, "lt")
    rep._cmp("e01_case1",
             a * a * K1 * K2 * (h * r2 + d - e),
             r1 * r2 * (a * h * K1 + 1.0) ** 2 / 3.0, "gt")
    rep._cmp("e01_case2", K1, 1.0 / (a * h) if a * h > 0 else inf, "lt")
    rep._cmp("e01_case3_k1", K1, 1.0 / (a * h) if a * h > 0 else inf, "gt")
    rep._cmp("e01_case3_hump",
             r1 * (1.0 + a * h * K1) ** 2 / (4.0 * a * a * h * K1 * K2)
             if a * h > 0 else inf,
             1.0 - d / r2 if r2 > 0 else -inf, "lt")
    rep._combo("e01_case3", "all", ("e01_case3_k1", "e01_case3_hump"))
    rep._combo("e01_any_case", "any", ("e01_case1", "e01_case2", "e01_case3"))
    rep._combo("e01_globally_stable", "all",
               ("e01_precondition", "e01_any_case"))

    rep._cmp("interior_stable_sufficient_1", r2 / K2, a / 2.0, "gt")
    rep._cmp("interior_stable_sufficient_2",
             r1 * r2 / (K1 * K2) + e * a * a / (1.0 + a * h * K1) ** 3,
             a * a * K2 * (h * r2 + e), "gt")
    rep._combo("interior_stable_sufficient", "all",
               ("interior_stable_sufficient_1", "interior_stable_sufficient_2"))

    # cubic-shape conditions (existence table)
    slope_note = ""
    try:
        cubic = interior_cubic(p)
    except DegenerateInteractionError:
        cubic = None
        slope_note = "degenerate interaction (a = 0 or h = 0)"
    if cubic is not None and r2 > 0:
        rep._cmp("cubic_has_critical_points",
                 cubic.c2 * cubic.c2, 3.0 * cubic.c1 * cubic.c3, "gt")
        have_xc = rep.holds("cubic_has_critical_points")
        F_xc1 = cubic(cubic.xc1) if have_xc else float("nan")
        F_xc2 = cubic(cubic.xc2) if have_xc else float("nan")
        xc1 = cubic.xc1 if have_xc else float("nan")
        xc2 = cubic.xc2 if have_xc else float("nan")
        rep._cmp("F_at_xc1_positive", F_xc1, 0.0, "gt")
        rep._cmp("F_at_xc2_negative", F_xc2, 0.0, "lt")
        rep._cmp("xc1_positive", xc1, 0.0, "gt")
        rep._cmp("xc2_positive", xc2, 0.0, "gt")
    else:
        for nm in ("cubic_has_critical_points", "F_at_xc1_positive",
                   "F_at_xc2_negative", "xc1_positive", "xc2_positive"):
            rep.conditions[nm] = Condition(nm, "gt", False,
                                           lhs=float("nan"), rhs=0.0,
                                           note=slope_note or "r2 = 0")

    slope_lhs = (h + (d - e) / r2) if r2 > 0 else inf
    slope_rhs = (r1 * (a * h * K1 + 1.0) ** 2 / (3.0 * a * a * K1 * K2)
                 if a > 0 else inf)
    rep._cmp("slope_cubic_monotone", slope_lhs, slope_rhs, "gt",
             note="F' > 0 everywhere when this holds")
    rep._cmp("slope_cubic_fold", slope_lhs, slope_rhs, "lt")
    rep._cmp("c0_negative", r1_over_a, k2eff, "gt",
             note="c0 < 0 iff r1/a > K2(1 - d/r2)")
    rep._cmp("c0_positive", r1_over_a, k2eff, "lt")

    # Table of sufficient existence conditions for interior equilibria
    rep._combo("table2_none_1", "all", ("e10_globally_stable",))
    rep._combo("table2_none_2", "all", ("c0_positive", "e01_case1"))
    rep._combo("table2_none_3", "all", ("e01_case2", "c0_positive"))
    rep._combo("table2_none_4", "all", ("e01_case3_k1", "e01_case3_hump"))
    rep._combo("table2_none", "any", ("table2_none_1", "table2_none_2",
                                      "table2_none_3", "table2_none_4"))
    rep._combo("table2_one_1", "all", ("host_persistence_obligate",
                                       "parasite_persistence"))
    rep._combo("table2_one_2", "all", ("c0_negative", "slope_cubic_monotone"))
    rep._combo("table2_one_3", "all", ("c0_negative", "slope_cubic_fold",
                                       "F_at_xc2_negative"))
    rep._combo("table2_one", "any", ("table2_one_1", "table2_one_2",
                                     "table2_one_3"))
    rep._combo("table2_two", "all", ("c0_positive", "slope_cubic_fold",
                                     "F_at_xc2_negative", "xc2_positive"))
    rep._combo("table2_three", "all", ("c0_negative", "slope_cubic_fold",
                                       "F_at_xc1_positive",
                                       "F_at_xc2_negative", "xc1_positive"))
    return rep


def table3_summary(p: EcoParams) -> dict:
    """Facultative-versus-obligate comparison of outcomes for one parameter set."""
    rep = condition_report(p)
    bnd = {eq.kind: eq for eq in boundary_equilibria(p)}
    interior = interior_equilibria(p)
    return {
        "facultative": rep.holds("facultative"),
        "E00": bnd["E00"].stability.value,
        "E10": bnd["E10"].stability.value,
        "E01": bnd["E01"].stability.value if "E01" in bnd else "absent",
        "host_persistence": rep.holds("host_persistence"),
        "parasite_persistence": rep.holds("parasite_persistence"),
        "permanence": rep.holds("permanence"),
        "host_extinction_sufficient": rep.holds("e01_globally_stable"),
        "parasite_extinction_sufficient": rep.holds("e10_globally_stable"),
        "n_interior": len(interior),
    }


# ---------------------------------------------------------------------------
# brute-force cross-check
# ---------------------------------------------------------------------------

@dataclass
class ConsistencyDiagnostic:
    ok: bool
    n_polynomial: int
    n_scan: int
    max_location_error: float
    borderline: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return dict(ok=self.ok, n_polynomial=self.n_polynomial,
                    n_scan=self.n_scan,
                    max_location_error=self.max_location_error,
                    borderline=self.borderline, note=self.note)


def consistency_check(p: EcoParams, n_grid: int = 100_000,
                      loc_tol: float = 1e-6) -> ConsistencyDiagnostic:
    """Cross-validate the cubic-root path against a nullcline sign scan.

    Scans s(x1) = g(x1) - f(x1) on a uniform grid over (0, K1), bisects each
    sign change, and compares count and locations with
    :func:`interior_equilibria`.  Root pairs closer than one grid cell (near
    tangencies) are reported as borderline matches rather than mismatches.
    """
    poly_roots = [eq.state[0] for eq in interior_equilibria(p)
                  for _ in range(eq.multiplicity)]
    if p.a == 0.0:
        return ConsistencyDiagnostic(ok=not poly_roots, n_polynomial=len(poly_roots),
                                     n_scan=0, max_location_error=0.0,
                                     note="no interaction (a = 0)")
    if p.r2 == 0.0:
        note = "r2 = 0: scan uses the direct parasite nullcline"

        def s(x1):
            return (p.e * p.a * x1 / (1.0 + p.h * p.a * x1) - p.d)
    else:
        note = ""

        def s(x1):
            return parasite_nullcline(x1, p) - prey_nullcline(x1, p)

    xs = np.linspace(ROOT_EDGE, p.K1 - ROOT_EDGE, n_grid)
    vals = s(xs)
    scan_roots: List[float] = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        lo, hi = xs[i], xs[i + 1]
        flo = vals[i]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = s(mid)
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        scan_roots.append(0.5 * (lo + hi))
    for i in np.nonzero(sign == 0)[0]:  # exact grid hits
        scan_roots.append(float(xs[i]))
    scan_roots = [x for x in sorted(scan_roots)
                  if prey_nullcline(x, p) > 0.0 or p.r2 == 0.0]

    # greedy nearest matching
    cell = (p.K1 - 2 * ROOT_EDGE) / (n_grid - 1)
    unmatched_poly = sorted(poly_roots)
    unmatched_scan = list(scan_roots)
    max_err = 0.0
    for x in list(unmatched_poly):
        if not unmatched_scan:
            break
        j = int(np.argmin([abs(x - y) for y in unmatched_scan]))
        err = abs(x - unmatched_scan[j])
        if err <= max(loc_tol, 2.0 * cell):
            max_err = max(max_err, err)
            unmatched_poly.remove(x)
            unmatched_scan.pop(j)
    borderline = 0
    # near-tangent pairs: two polynomial roots inside ~one grid cell produce
    # no sign change; accept them when the scan residual there is tiny
    leftovers = []
    for x in unmatched_poly:
        near_pair = sum(1 for y in poly_roots if abs(x - y) < 4.0 * cell) >= 2
        if near_pair and abs(s(x)) < 1e-6 * max(1.0, abs(p.K2)):
            borderline += 1
        else:
            leftovers.append(x)
    ok = not leftovers and not unmatched_scan and max_err <= max(loc_tol, 2.0 * cell)
    return ConsistencyDiagnostic(ok=ok, n_polynomial=len(poly_roots),
                                 n_scan=len(scan_roots),
                                 max_location_error=max_err,
                                 borderline=borderline, note=note)
