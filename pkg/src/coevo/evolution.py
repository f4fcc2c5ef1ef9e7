"""Equilibria, convergence stability and ESS checks for the 4-D model.

Convergence stability (CS) means local asymptotic stability of the full
co-evolutionary system.  An equilibrium's trait pair is an evolutionarily
stable strategy (ESS) when it is CS and each species' fitness function,
evaluated at the equilibrium environment, attains its global maximum over
the trait domain at the resident trait (value 0 for surviving species,
<= 0 when a species is extinct).

CS is decided from the numeric 4x4 Jacobian of the right-hand side; the
closed-form eigenvalues available for boundary and trait-aligned equilibria
are retained for cross-checking.  A boundary equilibrium whose transversal
eigenvalue (the invasion rate of the extinct species) is zero to tolerance
is resolved through the self-limitation term: when the invader's per-capita
growth decreases in its own density, the direction is attracting from the
biologically relevant side and the equilibrium is reported CS with a
``marginal`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .ecology import Condition, ConditionReport, interior_equilibria
from .model import evo_rhs, fitness_g1, fitness_g2, fitness_gradients
from .params import EvoConfig
from .stability import (StabilityClass, classify_eigenvalues,
                        numeric_jacobian, HYPERBOLICITY_TOL)
from .traits import TraitFamily

CS_TOL = 1e-8
MARGINAL_TOL = 1e-7
EXISTENCE_TOL = 1e-9
RESIDUAL_TOL = 1e-9


@dataclass
class EssSpeciesResult:
    max_value: float
    argmax: float
    resident_value: float
    extinct: bool
    passes: bool
    argmax_on_scan_edge: bool = False


@dataclass
class EssVerdict:
    """Outcome of the fitness-maximum principle at one equilibrium."""

    species: Tuple[EssSpeciesResult, EssSpeciesResult]
    principle_holds: bool
    cs: bool
    ess: bool
    grid_size: int
    refine_iterations: int
    scan_bounds: Tuple[Tuple[float, float], Tuple[float, float]]
    tol: float

    def to_dict(self) -> dict:
        return {
            "species": [s.__dict__ for s in self.species],
            "principle_holds": self.principle_holds,
            "cs": self.cs, "ess": self.ess,
            "grid_size": self.grid_size,
            "refine_iterations": self.refine_iterations,
            "scan_bounds": [list(b) for b in self.scan_bounds],
            "tol": self.tol,
        }


@dataclass
class EvoEquilibrium:
    """A steady state of the co-evolutionary system."""

    state: Tuple[float, float, float, float]
    kind: str                      # E0000 | HOST_ONLY | PARASITE_ONLY |
    #                                INTERIOR_ALIGNED | INTERIOR_MISALIGNED
    eigenvalues: Tuple[complex, ...]          # numeric Jacobian spectrum
    stability: StabilityClass
    cs: bool
    residual: float
    marginal: bool = False
    analytic_eigenvalues: Optional[Tuple[complex, ...]] = None
    ess: Optional[EssVerdict] = None
    notes: str = ""

    def to_dict(self) -> dict:
        out = {
            "state": list(self.state),
            "kind": self.kind,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "stability": self.stability.value,
            "cs": self.cs,
            "marginal": self.marginal,
            "residual": self.residual,
            "notes": self.notes,
        }
        if self.analytic_eigenvalues is not None:
            out["analytic_eigenvalues"] = [[z.real, z.imag]
                                           for z in self.analytic_eigenvalues]
        if self.ess is not None:
            out["ess"] = self.ess.to_dict()
        return out


def equilibrium_residual(state: Sequence[float], cfg: EvoConfig) -> float:
    """Max violation of the four steady-state equations.

    Density equations hold when either the density is zero or the per-capita
    rate vanishes; trait equations require the fitness gradients to vanish.
    """
    x1, x2, u1, u2 = state
    H1 = fitness_g1(u1, (u1, u2), (x1, x2), cfg)
    H2 = fitness_g2(u2, (u1, u2), (x1, x2), cfg)
    g1, g2 = fitness_gradients((u1, u2), (x1, x2), cfg)
    return max(min(abs(x1), abs(H1)), min(abs(x2), abs(H2)), abs(g1), abs(g2))


def _numeric_spectrum(state: Sequence[float], cfg: EvoConfig) -> np.ndarray:
    J = numeric_jacobian(lambda y: evo_rhs(y, cfg), state)
    return np.linalg.eigvals(J)


def _self_limitation(state: Sequence[float], cfg: EvoConfig, species: int) -> float:
    """dH_i/dx_i at the state, used to resolve a zero transversal eigenvalue."""
    x1, x2, u1, u2 = state
    p = cfg.frozen_params(u1, u2)
    s = 1.0 + p.h * p.a * x1
    if species == 1:
        return -p.r1 / p.K1 + p.h * p.a * p.a * x2 / (s * s)
    return -p.r2 / p.K2


def _decide_cs(state, cfg, eigenvalues) -> Tuple[bool, bool, str]:
    """(cs, marginal, note) with boundary marginal-direction resolution."""
    re = np.real(eigenvalues)
    if np.all(re < -CS_TOL):
        return True, False, ""
    if np.any(re > MARGINAL_TOL):
        return False, False, ""
    # no expanding direction; try to resolve near-zero transversal rates
    x1, x2, u1, u2 = state
    ev = list(eigenvalues)
    notes = []
    for species, dens in ((1, x1), (2, x2)):
        if dens > 1e-12:
            continue
        H = (fitness_g1(u1, (u1, u2), (x1, x2), cfg) if species == 1
             else fitness_g2(u2, (u1, u2), (x1, x2), cfg))
        if abs(H) > MARGINAL_TOL:
            continue
        if _self_limitation(state, cfg, species) >= 0.0:
            return False, False, "marginal transversal direction not self-limited"
        j = int(np.argmin([abs(z - H) for z in ev]))
        ev.pop(j)
        notes.append(f"x{species} invasion rate ~ 0 resolved by self-limitation")
    if notes and all(z.real < -CS_TOL for z in ev):
        return True, True, "; ".join(notes)
    return False, False, ""


def _build(state, kind, cfg, analytic=None, notes="") -> EvoEquilibrium:
    ev = _numeric_spectrum(state, cfg)
    cs, marginal, note2 = _decide_cs(state, cfg, ev)
    stability = classify_eigenvalues(ev)
    if cs and stability is StabilityClass.CENTER_OR_UNDETERMINED:
        stability = StabilityClass.STABLE_NODE if np.all(
            np.abs(ev.imag) < HYPERBOLICITY_TOL) else StabilityClass.STABLE_FOCUS
    txt = "; ".join(filter(None, (notes, note2)))
    return EvoEquilibrium(
        state=tuple(float(v) for v in state), kind=kind,
        eigenvalues=tuple(complex(z) for z in ev),
        stability=stability, cs=cs,
        residual=equilibrium_residual(state, cfg), marginal=marginal,
        analytic_eigenvalues=None if analytic is None else tuple(
            complex(z) for z in analytic),
        notes=txt)


# ---------------------------------------------------------------------------
# boundary equilibria for general trait models
# ---------------------------------------------------------------------------

def _trait_candidates(cfg: EvoConfig) -> List[Tuple[float, float]]:
    t = cfg.traits
    if t.bounded:
        return [(0.0, 0.0), (0.0, t.c), (t.c, 0.0), (t.c, t.c)]
    return [(0.0, 0.0)]


def boundary_evo_equilibria(cfg: EvoConfig, with_failures: bool = False):
    """Boundary steady states at trait pairs where the needed derivatives vanish.

    Candidates are the trait-box corners for the bounded family and the
    origin for the unbounded families.  For each candidate the existence
    equalities are tested; failures are reported (not raised) and available
    via ``with_failures=True``.
    """
    found: List[EvoEquilibrium] = []
    failures: List[dict] = []
    for (u, v) in _trait_candidates(cfg):
        t = cfg.traits
        K1 = t.K1_eval(u)
        K2 = t.K2_eval(v)
        a = t.a_eval(u, v)
        dval, dd1, dd2 = cfg.death_eval(v)
        s = 1.0 + cfg.h * a.value * K1.value
        s1, s2 = cfg.sigma1_sq, cfg.sigma2_sq

        # extinction equilibrium (0, 0, u, v)
        if abs(dd1) <= EXISTENCE_TOL:
            analytic = (cfg.r1, cfg.r2 - dval, 0.0, -s2 * dd2)
            found.append(_build((0.0, 0.0, u, v), "E0000", cfg, analytic))
        else:
            failures.append({"traits": (u, v), "kind": "E0000",
                             "reason": f"d'(v) = {dd1:.3g} != 0"})

        # host-only equilibrium (K1(u), 0, u, v)
        need = cfg.e * K1.value * a.dv2 / (s * s)
        if abs(K1.d1) <= EXISTENCE_TOL and abs(dd1 - need) <= EXISTENCE_TOL:
            lam2 = cfg.e * a.value * K1.value / s - dval + cfg.r2
            lam3 = s1 * cfg.r1 * K1.d2 / K1.value
            lam4 = s2 * (cfg.e * K1.value
                         * (a.dv2v2 * s - 2.0 * K1.value * a.dv2 * a.dv2)
                         / (s ** 3) - dd2)
            analytic = (-cfg.r1, lam2, lam3, lam4)
            found.append(_build((K1.value, 0.0, u, v), "HOST_ONLY", cfg,
                                analytic))
        else:
            failures.append({"traits": (u, v), "kind": "HOST_ONLY",
                             "reason": "K1'(u) != 0 or d'(v) != e K1 a_v2 / (1+haK1)^2"})

        # parasite-only equilibrium (0, K2(v)(1 - d(v)/r2), u, v)
        need = cfg.r2 * K2.d1 / K2.value if cfg.r2 > 0 else math.inf
        if (abs(a.dv1) <= EXISTENCE_TOL and dval < cfg.r2
                and abs(dd1 - need) <= EXISTENCE_TOL):
            x2 = K2.value * (1.0 - dval / cfg.r2)
            lam1 = cfg.r1 - a.value * x2
            lam2 = dval - cfg.r2
            lam3 = -s1 * x2 * a.dv1v1
            lam4 = s2 * (cfg.r2 * (1.0 - dval / cfg.r2)
                         * (K2.value * K2.d2 - 2.0 * K2.d1 * K2.d1)
                         / (K2.value * K2.value) - dd2)
            analytic = (lam1, lam2, lam3, lam4)
            found.append(_build((0.0, x2, u, v), "PARASITE_ONLY", cfg,
                                analytic))
        else:
            failures.append({"traits": (u, v), "kind": "PARASITE_ONLY",
                             "reason": "a_v1 != 0, d(v) >= r2, or d'(v) != r2 K2'/K2"})
    if with_failures:
        return found, failures
    return found


# ---------------------------------------------------------------------------
# trait-aligned equilibria (symmetric unbounded family)
# ---------------------------------------------------------------------------

def _require_gaussian(cfg: EvoConfig) -> None:
    if cfg.traits.family is not TraitFamily.GAUSSIAN:
        raise ValueError("this analysis applies to the GAUSSIAN trait family")


def trait_block(cfg: EvoConfig, x1: float, x2: float) -> np.ndarray:
    """Jacobian block of the trait equations at aligned traits (0, 0)."""
    t = cfg.traits
    s = 1.0 + cfg.h * t.a0 * x1
    sa2 = t.sigma_a ** 2
    b11 = cfg.sigma1_sq * (-cfg.r1 * x1 / (t.sigma_K1 ** 2 * t.K01)
                           + t.a0 * x2 / (sa2 * s * s))
    b12 = -cfg.sigma1_sq * t.a0 * x2 / (sa2 * s * s)
    b21 = cfg.sigma2_sq * cfg.e * t.a0 * x1 / (sa2 * s * s)
    b22 = -cfg.sigma2_sq * (cfg.r2 * x2 / (t.sigma_K2 ** 2 * t.K02)
                            + t.a0 * cfg.e * x1 / (sa2 * s * s))
    return np.array([[b11, b12], [b21, b22]])


def aligned_equilibria(cfg: EvoConfig) -> List[EvoEquilibrium]:
    """Steady states with both traits at the carrying-capacity peak (0, 0)."""
    _require_gaussian(cfg)
    from .ecology import eco_jacobian
    p = cfg.frozen_params(0.0, 0.0)
    out: List[EvoEquilibrium] = []

    def block_spectrum(x1, x2):
        A = eco_jacobian((x1, x2), p)
        B = trait_block(cfg, x1, x2)
        return np.concatenate([np.linalg.eigvals(A), np.linalg.eigvals(B)])

    out.append(_build((0.0, 0.0, 0.0, 0.0), "E0000", cfg,
                      analytic=block_spectrum(0.0, 0.0)))
    out.append(_build((p.K1, 0.0, 0.0, 0.0), "HOST_ONLY", cfg,
                      analytic=block_spectrum(p.K1, 0.0)))
    if p.r2 > p.d:
        x2 = p.K2 * (1.0 - p.d / p.r2)
        out.append(_build((0.0, x2, 0.0, 0.0), "PARASITE_ONLY", cfg,
                          analytic=block_spectrum(0.0, x2)))
    for eq in interior_equilibria(p):
        x1, x2 = eq.state
        built = _build((x1, x2, 0.0, 0.0), "INTERIOR_ALIGNED", cfg,
                       analytic=block_spectrum(x1, x2))
        rep = ess_sufficient_conditions(cfg, built)
        verdict = "holds" if rep.holds("stable_evo") else "fails"
        note = f"closed-form stability sufficient condition {verdict}"
        built.notes = "; ".join(filter(None, (built.notes, note)))
        out.append(built)
    return out


# ---------------------------------------------------------------------------
# misaligned interior equilibria (traits away from the peak)
# ---------------------------------------------------------------------------

def _g_ratio(cfg: EvoConfig, u1: float, u2: float) -> float:
    t = cfg.traits
    K1 = t.K1_eval(u1).value
    K2 = t.K2_eval(u2).value
    return math.sqrt(cfg.e * cfg.r1 * t.sigma_K2 ** 2 * u1 * K2
                     / (cfg.r2 * t.sigma_K1 ** 2 * u2 * K1))


def _x1_host_branch(cfg: EvoConfig, u1: float, u2: float, g: float) -> float:
    # positive root of the host equation with x2 = g x1
    t = cfg.traits
    K1 = t.K1_eval(u1).value
    a = t.a_eval(u1, u2).value
    ah = a * cfg.h
    b = K1 - 1.0 / ah - g * K1 / (cfg.r1 * cfg.h)
    return 0.5 * (b + math.sqrt(b * b + 4.0 * K1 / ah))


def _x1_parasite_branch(cfg: EvoConfig, u1: float, u2: float, g: float) -> float:
    # positive root of the parasite equation with x2 = g x1
    t = cfg.traits
    K2 = t.K2_eval(u2).value
    a = t.a_eval(u1, u2).value
    d = cfg.d
    ah = a * cfg.h
    b = (cfg.e * K2 / (cfg.r2 * g * cfg.h) + (cfg.r2 - d) * K2 / (cfg.r2 * g)
         - 1.0 / ah)
    c0 = (cfg.r2 - d) * K2 / (cfg.r2 * g * ah)
    disc = b * b + 4.0 * c0
    if disc < 0.0:
        return math.nan
    return 0.5 * (b + math.sqrt(disc))


_BAD = np.array([math.nan, math.nan])


def _misaligned_residual(cfg: EvoConfig, u1: float, u2: float) -> np.ndarray:
    t = cfg.traits
    u1, u2 = float(u1), float(u2)
    if not (u1 > 0.0 and u2 > 0.0):
        return _BAD
    K1 = t.K1_eval(u1).value
    K2 = t.K2_eval(u2).value
    a = t.a_eval(u1, u2).value
    if K1 < 1e-300 or K2 < 1e-300 or a <= 0.0:
        return _BAD  # trait ran into the far tails; treat as no solution
    g = _g_ratio(cfg, u1, u2)
    if not math.isfinite(g) or g <= 0.0:
        return _BAD
    f1 = _x1_host_branch(cfg, u1, u2, g)
    f2 = _x1_parasite_branch(cfg, u1, u2, g)
    if not (math.isfinite(f1) and math.isfinite(f2)):
        return _BAD
    s = 1.0 + cfg.h * a * f1
    grad = (cfg.r1 * u1 / (t.sigma_K1 ** 2 * K1)
            - (u1 - u2) * g * a / (t.sigma_a ** 2 * s * s))
    return np.array([f1 - f2, grad])


def misaligned_interior_solve(cfg: EvoConfig, n_starts: int = 21,
                              u_max: Optional[float] = None
                              ) -> List[EvoEquilibrium]:
    """Interior equilibria with traits off the peak (u1*u2 != 0).

    The trait equations force u1, u2 and u1 - u2 to share a sign with
    |u1| > |u2|, so the search runs over 0 < u2 < u1 <= u_max with damped
    Newton iterations from a multistart grid; every solution is mirrored
    through the origin.  An empty list is a legitimate outcome.
    """
    _require_gaussian(cfg)
    if cfg.r2 <= 0:
        return []
    t = cfg.traits
    if u_max is None:
        u_max = 6.0 * max(t.sigma_K1, t.sigma_K2)
    grid = np.linspace(u_max / n_starts, u_max, n_starts)
    sols: List[Tuple[float, float]] = []
    for u1s in grid:
        for u2s in grid:
            if not (0.0 < u2s < u1s):
                continue
            u = np.array([u1s, u2s])
            r = _misaligned_residual(cfg, *u)
            if not np.all(np.isfinite(r)):
                continue
            ok = False
            for _ in range(60):
                nr = float(np.max(np.abs(r)))
                if nr < 1e-11:
                    ok = True
                    break
                # finite-difference Jacobian of the 2-vector residual
                J = np.empty((2, 2))
                good = True
                for j in range(2):
                    step = 1e-7 * max(1.0, abs(u[j]))
                    up = u.copy(); up[j] += step
                    um = u.copy(); um[j] -= step
                    if not (0 < um[1] and um[1] < up[0]):
                        good = False
                        break
                    rp = _misaligned_residual(cfg, *up)
                    rm = _misaligned_residual(cfg, *um)
                    if not (np.all(np.isfinite(rp)) and np.all(np.isfinite(rm))):
                        good = False
                        break
                    J[:, j] = (rp - rm) / (2.0 * step)
                if not good:
                    break
                try:
                    step_vec = np.linalg.solve(J, -r)
                except np.linalg.LinAlgError:
                    break
                lam = 1.0
                moved = False
                for _ in range(30):
                    cand = u + lam * step_vec
                    if 0.0 < cand[1] < cand[0] < 10.0 * u_max:
                        rc = _misaligned_residual(cfg, *cand)
                        if (np.all(np.isfinite(rc))
                                and float(np.max(np.abs(rc))) < nr):
                            u, r = cand, rc
                            moved = True
                            break
                    lam *= 0.5
                if not moved:
                    break
            if not ok:
                continue
            if any(abs(u[0] - s0) < 1e-6 and abs(u[1] - s1) < 1e-6
                   for s0, s1 in sols):
                continue
            sols.append((float(u[0]), float(u[1])))

    out: List[EvoEquilibrium] = []
    for u1, u2 in sorted(sols):
        g = _g_ratio(cfg, u1, u2)
        x1 = _x1_host_branch(cfg, u1, u2, g)
        x2 = g * x1
        if not (x1 > 0 and x2 > 0):
            continue
        state = (x1, x2, u1, u2)
        if equilibrium_residual(state, cfg) > RESIDUAL_TOL:
            continue
        out.append(_build(state, "INTERIOR_MISALIGNED", cfg))
        out.append(_build((x1, x2, -u1, -u2), "INTERIOR_MISALIGNED", cfg,
                          notes="mirror"))
    out.sort(key=lambda e: (e.state[2], e.state[3]))
    return out


# ---------------------------------------------------------------------------
# ESS maximum principle
# ---------------------------------------------------------------------------

ESS_TOL = 1e-6
ESS_GRID = 2001
GOLDEN_WIDTH = 1e-10
POSITIVE_DENSITY_TOL = 1e-9


def _scan_bounds(cfg: EvoConfig) -> Tuple[float, float]:
    t = cfg.traits
    if t.bounded:
        return (0.0, t.c)
    L = 10.0 * max(t.sigma_K1, t.sigma_K2, t.sigma_a)
    return (-L, L)


def _golden_max(fun, lo: float, hi: float, width: float) -> Tuple[float, float, int]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    it = 0
    while b - a > width and it < 200:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
        it += 1
    xm = 0.5 * (a + b)
    return xm, fun(xm), it


def ess_check(eq: EvoEquilibrium, cfg: EvoConfig) -> EssVerdict:
    """Apply the fitness-maximum principle at an equilibrium.

    Each species' fitness over its trait domain is maximized by a dense grid
    scan refined with golden-section search.  For the unbounded families the
    scan covers +-10 widths; all trait functions decay outward so the
    maximum cannot escape this window for equilibria with bounded densities
    (an ``argmax_on_scan_edge`` flag records when that assumption bites).
    """
    x1, x2, u1, u2 = eq.state
    u = (u1, u2)
    x = (x1, x2)
    lo, hi = _scan_bounds(cfg)
    grid = np.linspace(lo, hi, ESS_GRID)
    step = grid[1] - grid[0]
    results = []
    total_iters = 0
    for species in (1, 2):
        fun = (lambda v: fitness_g1(v, u, x, cfg)) if species == 1 else (
            lambda v: fitness_g2(v, u, x, cfg))
        vals = np.array([fun(v) for v in grid])
        j = int(np.argmax(vals))
        blo = grid[max(0, j - 1)]
        bhi = grid[min(ESS_GRID - 1, j + 1)]
        argmax, fmax, iters = _golden_max(fun, blo, bhi, GOLDEN_WIDTH)
        total_iters += iters
        if vals[j] > fmax:
            argmax, fmax = grid[j], float(vals[j])
        on_edge = j in (0, ESS_GRID - 1)
        resident = fun(u[species - 1])
        extinct = x[species - 1] <= POSITIVE_DENSITY_TOL
        if extinct:
            passes = fmax <= ESS_TOL
        else:
            passes = abs(fmax) <= ESS_TOL and resident >= fmax - ESS_TOL
        results.append(EssSpeciesResult(
            max_value=float(fmax), argmax=float(argmax),
            resident_value=float(resident), extinct=bool(extinct),
            passes=bool(passes), argmax_on_scan_edge=bool(on_edge)))
    principle = all(r.passes for r in results)
    return EssVerdict(species=(results[0], results[1]),
                      principle_holds=principle, cs=eq.cs,
                      ess=bool(eq.cs and principle),
                      grid_size=ESS_GRID, refine_iterations=total_iters,
                      scan_bounds=((lo, hi), (lo, hi)), tol=ESS_TOL)


# ---------------------------------------------------------------------------
# sufficient analytic ESS conditions (symmetric unbounded family)
# ---------------------------------------------------------------------------

def ess_sufficient_conditions(cfg: EvoConfig,
                              eq: Optional[EvoEquilibrium] = None
                              ) -> ConditionReport:
    """Closed-form sufficient conditions for CS/ESS of aligned equilibria.

    The ratio conditions involving the equilibrium densities are evaluated
    when ``eq`` is a trait-aligned interior equilibrium; the uniqueness
    bundle additionally requires sigma_K2 > sigma_K1 and is reported
    not-applicable otherwise.
    """
    _require_gaussian(cfg)
    t = cfg.traits
    p = cfg.frozen_params(0.0, 0.0)
    rep = ConditionReport(p)
    r1, r2, e, h, d = cfg.r1, cfg.r2, cfg.e, cfg.h, cfg.d
    K01, K02, a0 = t.K01, t.K02, t.a0
    sK1, sK2, sa = t.sigma_K1, t.sigma_K2, t.sigma_a

    rep._cmp("stable_evo_1", min(2.0 * r2 / K02, r1 / (sK1 ** 2 * K01)), a0, "gt")
    rep._cmp("stable_evo_2",
             r1 * r2 / (K01 * K02) + e * a0 ** 2 / (1.0 + a0 * h * K01) ** 3,
             a0 ** 2 * K02 * (h * r2 + e), "gt")
    ratio_bound = max((sK2 / sK1) * math.sqrt(r1 * e * K02 / (r2 * K01))
                      if r2 > 0 else math.inf,
                      r1 * sK2 ** 2 * sa ** 2 / (a0 * K01))
    if eq is not None and eq.kind == "INTERIOR_ALIGNED" and eq.state[0] > 0:
        dens_ratio = eq.state[1] / eq.state[0]
    else:
        dens_ratio = math.nan
    rep._cmp("stable_evo_3", ratio_bound, dens_ratio, "gt",
             note="needs a trait-aligned interior equilibrium" if math.isnan(
                 dens_ratio) else "")
    rep._combo("stable_evo", "all",
               ("stable_evo_1", "stable_evo_2", "stable_evo_3"))

    rep._cmp("ess_gradient_bound", r1 / (sK1 ** 2 * K01),
             ratio_bound * a0 / sa ** 2, "gt")
    rep._combo("interior_ess_sufficient", "all",
               ("stable_evo", "ess_gradient_bound"))

    sqrt_term = (sK2 / sK1) * math.sqrt(r1 * e * K02 / (r2 * K01)) \
        if r2 > 0 else math.inf
    rep._cmp("corollary1_ratio", sqrt_term, dens_ratio, "gt")
    rep._cmp("corollary1_width", sa ** 2 / (sK1 * sK2),
             math.sqrt(e * K01 * K02 / (r1 * r2)) * a0 if r2 > 0 else math.inf,
             "gt")
    rep._combo("corollary_case1", "all", ("corollary1_ratio", "corollary1_width"))
    rep._cmp("corollary2_ratio", r1 * sK2 ** 2 * sa ** 2 / (a0 * K01),
             dens_ratio, "gt")
    rep._cmp("corollary2_width", sK1 * sK2, 1.0, "lt")
    rep._combo("corollary_case2", "all", ("corollary2_ratio", "corollary2_width"))
    rep._combo("corollary_any", "any", ("corollary_case1", "corollary_case2"))
    rep._combo("corollary_ess_sufficient", "all",
               ("stable_evo_1", "stable_evo_2", "corollary_any"))

    rep._cmp("host_only_unique_ess", r2 + e * a0 * K01 / (1.0 + a0 * h * K01),
             d, "lt")

    if sK2 > sK1:
        rep._cmp("unique_bound_K02", K02 * a0,
                 r1 / (1.0 - d / r2) if (r2 > 0 and r2 > d) else math.inf, "lt")
        rep._cmp("unique_bound_K01", K01 * a0, 1.0 / h if h > 0 else math.inf,
                 "lt")
        rep._combo("interior_unique_ess", "all",
                   ("unique_bound_K02", "unique_bound_K01", "stable_evo_1",
                    "stable_evo_2", "corollary1_ratio", "corollary1_width"))
    else:
        for nm in ("unique_bound_K02", "unique_bound_K01",
                   "interior_unique_ess"):
            rep.conditions[nm] = Condition(
                nm, "na", False,
                note="not applicable: requires sigma_K2 > sigma_K1")
    return rep
