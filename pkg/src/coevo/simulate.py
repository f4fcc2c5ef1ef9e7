"""Time integration with steady-state and oscillation detection."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import find_peaks

from . import _integrator as core
from .params import EcoParams, EvoConfig
from .traits import TraitFamily

Model = Union[EcoParams, EvoConfig]


class StepUnderflowError(RuntimeError):
    """The step-size controller collapsed below 1e-14 * t_end."""


class NotOscillatingError(ValueError):
    """Phase metrics requested for a non-oscillating trajectory."""


def pack_model(model: Model) -> Tuple[int, np.ndarray, int]:
    """(family code, parameter vector, state dimension) for the compiled core."""
    if isinstance(model, EcoParams):
        p = np.array([model.r1, model.r2, model.K1, model.K2,
                      model.a, model.h, model.e, model.d])
        return core.FAMILY_ECO, p, 2
    t = model.traits
    base = [model.r1, model.r2, model.h, model.e,
            model.d if model.d is not None else 0.0,
            t.K01, t.K02, t.a0, t.sigma_K1, t.sigma_K2, t.sigma_a,
            model.sigma1_sq, model.sigma2_sq]
    if t.family is TraitFamily.GAUSSIAN:
        return core.FAMILY_GAUSSIAN, np.array(base), 4
    if t.family is TraitFamily.ASYMMETRIC_GAUSSIAN_A:
        return core.FAMILY_ASYMMETRIC, np.array(base + [t.beta]), 4
    return core.FAMILY_QUARTIC, np.array(
        base + [t.c, t.d0 if t.d0 is not None else 0.0,
                t.sigma_d if t.sigma_d is not None else -1.0]), 4


def rhs(state: Sequence[float], model: Model) -> np.ndarray:
    """Model right-hand side through the compiled kernel."""
    family, p, n = pack_model(model)
    y = np.asarray(state, dtype=float)
    if y.size != n:
        raise ValueError(f"state must have {n} components")
    return core.rhs_array(family, y, p)


@dataclass(frozen=True)
class SimSpec:
    """One integration request."""

    y0: Tuple[float, ...]
    t_end: float
    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: float = math.inf
    max_rows: int = 200_000
    conv_tol: float = 1e-9       # early-exit when max |dy/dt| drops below
    detect: bool = True

    def __post_init__(self) -> None:
        if not self.t_end > 0:
            raise ValueError("t_end must be > 0")
        if not 1e-12 <= self.rtol <= 1e-3:
            raise ValueError("rtol must lie in [1e-12, 1e-3]")
        if not self.atol > 0:
            raise ValueError("atol must be > 0")
        if any(v < 0 for v in self.y0[:2]):
            raise ValueError("population components must be nonnegative")
        if self.max_rows < 16:
            raise ValueError("max_rows too small")

    def to_dict(self) -> dict:
        return {"y0": list(self.y0), "t_end": self.t_end, "rtol": self.rtol,
                "atol": self.atol,
                "max_step": self.max_step if math.isfinite(self.max_step) else None,
                "max_rows": self.max_rows, "conv_tol": self.conv_tol,
                "detect": self.detect}


@dataclass
class Event:
    kind: str                                  # CONVERGED | OSCILLATING | NONE
    state: Optional[Tuple[float, ...]] = None  # for CONVERGED
    period: Optional[float] = None             # for OSCILLATING
    amplitude: Optional[float] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind,
                "state": None if self.state is None else list(self.state),
                "period": self.period, "amplitude": self.amplitude}


@dataclass
class Trajectory:
    """Recorded time series with a terminal event."""

    times: np.ndarray
    states: np.ndarray
    terminal: Event
    meta: dict = field(default_factory=dict)

    @property
    def final_state(self) -> Tuple[float, ...]:
        return tuple(self.states[-1])

    def columns(self) -> List[str]:
        return ["t", "x1", "x2"] + (["u1", "u2"] if self.states.shape[1] == 4 else [])

    def to_csv(self, path) -> None:
        cols = self.columns()
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for t, row in zip(self.times, self.states):
                cells = [format(t, ".17g")] + [format(v, ".17g") for v in row]
                fh.write(",".join(cells) + "\n")

    def write_sidecar(self, path) -> None:
        with open(path, "w") as fh:
            json.dump({"terminal": self.terminal.to_dict(), **self.meta},
                      fh, indent=2)
            fh.write("\n")


def integrate(spec: SimSpec, model: Model) -> Trajectory:
    """Integrate the model with the embedded 4(5) pair.

    Deterministic for a given (spec, model).  Population components that end
    within ``atol`` below zero (integration round-off; the axes are invariant
    for the exact flow) are clamped to zero in the recorded output.
    """
    family, p, n = pack_model(model)
    y0 = np.asarray(spec.y0, dtype=float)
    if y0.size != n:
        raise ValueError(f"initial state must have {n} components, got {y0.size}")
    if isinstance(model, EvoConfig) and model.traits.bounded:
        for u in y0[2:]:
            model.traits.check_domain(float(u), slack=0.0)
    conv = spec.conv_tol if spec.detect else -1.0
    times, states, y_final, t_final, status, nsteps = core.dopri5(
        family, y0, p, float(spec.t_end), float(spec.rtol), float(spec.atol),
        float(conv), int(spec.max_rows), float(spec.max_step))
    if status == -1:
        raise StepUnderflowError(
            f"step size underflow at t = {t_final:.6g} (state {y_final})")
    pop = states[:, :2]
    pop[(pop < 0.0) & (pop > -spec.atol)] = 0.0
    meta = {"spec": spec.to_dict(), "model": model.to_dict(),
            "model_kind": "eco" if isinstance(model, EcoParams) else "evo",
            "n_steps": int(nsteps), "t_final": float(t_final),
            "integrator": "dormand-prince-4(5)"}
    traj = Trajectory(times=times, states=states,
                      terminal=Event("NONE"), meta=meta)
    if spec.detect:
        ev = detect_events(traj, model)
        if status == 1 and ev.kind != "CONVERGED":
            # early exit on tiny derivatives; confirm with the final point
            ev = Event("CONVERGED", state=traj.final_state)
        traj.terminal = ev if ev.kind != "NONE" else Event("REACHED_T_END")
    else:
        traj.terminal = Event("REACHED_T_END")
    return traj


# ---------------------------------------------------------------------------
# event detection
# ---------------------------------------------------------------------------

CONV_RHS_TOL = 1e-8
CONV_DRIFT_TOL = 1e-8
OSC_MIN_PEAKS = 4
OSC_MIN_REL_AMPLITUDE = 1e-3
OSC_MAX_SPACING_CV = 0.2
PEAK_PROMINENCE_FRAC = 0.25    # of the windowed swing; rejects micro-ripples


def _window(traj: Trajectory) -> np.ndarray:
    n = len(traj.times)
    return np.arange(n // 2, n)


def detect_events(traj: Trajectory, model: Optional[Model] = None) -> Event:
    """Classify the tail of a trajectory.

    CONVERGED: the final derivative is below ``CONV_RHS_TOL`` (sup norm) and
    the state drifts less than ``CONV_DRIFT_TOL`` over the trailing window.
    OSCILLATING: at least ``OSC_MIN_PEAKS`` prominent x1 maxima in the second
    half, swing above ``OSC_MIN_REL_AMPLITUDE`` and regular spacing
    (CV < ``OSC_MAX_SPACING_CV``).  Otherwise NONE.
    """
    t = traj.times
    x = traj.states
    n = len(t)
    if model is not None:
        rhs_inf = float(np.max(np.abs(rhs(x[-1], model))))
    else:
        rhs_inf = math.inf
    tail = x[max(0, n - max(16, n // 20)):]
    drift = float(np.max(np.abs(tail - tail[-1])))
    if rhs_inf < CONV_RHS_TOL and drift < CONV_DRIFT_TOL:
        return Event("CONVERGED", state=tuple(x[-1]))

    w = _window(traj)
    if len(w) >= 1000:
        tw = t[w]
        x1 = x[w, 0]
        rng = float(x1.max() - x1.min())
        scale = max(float(np.max(np.abs(x1))), 1e-300)
        if rng / scale > OSC_MIN_REL_AMPLITUDE:
            pk, _ = find_peaks(x1, prominence=PEAK_PROMINENCE_FRAC * rng)
            if len(pk) >= OSC_MIN_PEAKS:
                gaps = np.diff(tw[pk])
                period = float(np.mean(gaps))
                cv = float(np.std(gaps) / period) if period > 0 else math.inf
                if cv < OSC_MAX_SPACING_CV:
                    tr, _ = find_peaks(-x1, prominence=PEAK_PROMINENCE_FRAC * rng)
                    if len(tr):
                        amp = float((np.mean(x1[pk]) - np.mean(x1[tr]))
                                    / max(abs(np.mean(x1[pk])), 1e-300))
                    else:
                        amp = rng / scale
                    return Event("OSCILLATING", period=period, amplitude=amp)
    return Event("NONE")


# ---------------------------------------------------------------------------
# phase metrics
# ---------------------------------------------------------------------------

@dataclass
class PhaseReport:
    """Host/parasite peak timing for an oscillating trajectory.

    ``lag_fraction`` is the circular mean of per-peak lags between x1-peak
    and nearest x2-peak times, folded to [0, 0.5] of the period (0 =
    in-phase, 0.5 = anti-phase).  ``lag_trough`` repeats the computation on
    minima; ``lag_spectral`` is the cross-spectrum phase at the dominant
    frequency.  For pulse-like waveforms the trough and spectral variants
    are useful cross-checks on the peak-based headline number.
    """

    period: float
    lag_fraction: float
    lag_signed: float
    lag_trough: float
    lag_spectral: float
    n_peaks_x1: int
    n_peaks_x2: int
    spacing_cv: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("period", "lag_fraction", "lag_signed", "lag_trough",
                 "lag_spectral", "n_peaks_x1", "n_peaks_x2", "spacing_cv")}


def _refined_peaks(t: np.ndarray, x: np.ndarray, prominence: float) -> np.ndarray:
    idx, _ = find_peaks(x, prominence=prominence)
    times = []
    for i in idx:
        if 0 < i < len(x) - 1:
            # parabola through the three samples around the peak
            t0, t1, t2 = t[i - 1], t[i], t[i + 1]
            y0, y1, y2 = x[i - 1], x[i], x[i + 1]
            denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
            if denom != 0:
                A = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / denom
                B = (t2 * t2 * (y0 - y1) + t1 * t1 * (y2 - y0)
                     + t0 * t0 * (y1 - y2)) / denom
                if A < 0:
                    times.append(-B / (2 * A))
                    continue
        times.append(t[i])
    return np.asarray(times)


def _pair_lags(tp1: np.ndarray, tp2: np.ndarray, period: float) -> np.ndarray:
    lags = []
    for tp in tp1:
        j = int(np.argmin(np.abs(tp2 - tp)))
        lag = (tp2[j] - tp) / period
        lags.append((lag + 0.5) % 1.0 - 0.5)
    return np.asarray(lags)


def _circular_fold(lags: np.ndarray) -> Tuple[float, float]:
    z = np.mean(np.exp(2j * np.pi * lags))
    signed = float(np.angle(z) / (2 * np.pi))
    return abs(signed), signed


def _spectral_lag(t: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> float:
    m = 1 << int(np.ceil(np.log2(max(4 * len(t), 1024))))
    tu = np.linspace(t[0], t[-1], m)
    a = np.interp(tu, t, x1)
    b = np.interp(tu, t, x2)
    a -= a.mean()
    b -= b.mean()
    w = np.hanning(m)
    A = np.fft.rfft(a * w)
    B = np.fft.rfft(b * w)
    k = 1 + int(np.argmax(np.abs(A[1:])))
    return abs(float(np.angle(A[k] * np.conj(B[k])) / (2 * np.pi)))


def phase_metrics(traj: Trajectory) -> PhaseReport:
    """Peak-timing phase lag between host and parasite oscillations."""
    if traj.terminal.kind != "OSCILLATING":
        raise NotOscillatingError(
            f"trajectory terminal is {traj.terminal.kind}, not OSCILLATING")
    w = _window(traj)
    t = traj.times[w]
    x1 = traj.states[w, 0]
    x2 = traj.states[w, 1]
    r1 = float(x1.max() - x1.min())
    r2 = float(x2.max() - x2.min())
    tp1 = _refined_peaks(t, x1, PEAK_PROMINENCE_FRAC * r1)
    tp2 = _refined_peaks(t, x2, PEAK_PROMINENCE_FRAC * r2)
    if len(tp1) < 2 or len(tp2) < 1:
        raise NotOscillatingError("too few prominent peaks for phase metrics")
    gaps = np.diff(tp1)
    period = float(np.mean(gaps))
    cv = float(np.std(gaps) / period)
    lag_fraction, lag_signed = _circular_fold(_pair_lags(tp1, tp2, period))
    tt1 = _refined_peaks(t, -x1, PEAK_PROMINENCE_FRAC * r1)
    tt2 = _refined_peaks(t, -x2, PEAK_PROMINENCE_FRAC * r2)
    if len(tt1) >= 2 and len(tt2) >= 1:
        lag_trough, _ = _circular_fold(_pair_lags(tt1, tt2, period))
    else:
        lag_trough = float("nan")
    return PhaseReport(period=period, lag_fraction=lag_fraction,
                       lag_signed=lag_signed, lag_trough=lag_trough,
                       lag_spectral=_spectral_lag(t, x1, x2),
                       n_peaks_x1=len(tp1), n_peaks_x2=len(tp2),
                       spacing_cv=cv)
