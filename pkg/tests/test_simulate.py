import math

import numpy as np
import pytest

from conftest import draw_eco, gaussian_cfg
from coevo import (EcoParams, Event, SimSpec, Trajectory, detect_events,
                   integrate, phase_metrics, NotOscillatingError)
from coevo.cli import build_evo
from coevo.recipes import recipes


def run_recipe(tag):
    r = recipes()[f"sec42_sigma{tag}"]
    cfg = build_evo(r["model"])
    nm = r["numerics"]
    spec = SimSpec(y0=tuple(r["command"]["y0"]), t_end=nm["t_end"],
                   rtol=nm["rtol"], atol=nm["atol"])
    return integrate(spec, cfg), cfg


def test_decoupled_logistics():
    p = EcoParams(r1=0.8, r2=0.5, K1=1.3, K2=2.0, a=0.0, h=1.0, e=0.5, d=0.1)
    t_star = 200.0 / min(p.r1, p.r2 - p.d)
    spec = SimSpec(y0=(0.5, 0.5), t_end=t_star, rtol=1e-10, atol=1e-12)
    traj = integrate(spec, p)
    target = (p.K1, p.K2 * (1 - p.d / p.r2))
    assert np.allclose(traj.final_state, target, atol=1e-6)


def test_reference_converges_to_aligned_interior():
    traj, _ = run_recipe("05")
    assert traj.terminal.kind == "CONVERGED"
    assert np.allclose(traj.terminal.state, (0.5428, 1.0841, 0.0, 0.0),
                       atol=1e-3)


def test_frozen_traits_fall_to_parasite_only(eco_ref):
    spec = SimSpec(y0=(0.5, 2.0), t_end=2000.0, rtol=1e-10, atol=1e-12)
    traj = integrate(spec, eco_ref)
    assert traj.terminal.kind == "CONVERGED"
    assert np.allclose(traj.terminal.state, (0.0, 0.26), atol=1e-6)


def test_detect_constant_trajectory(eco_ref):
    state = np.array([0.0, 0.26])
    times = np.linspace(0, 10, 1200)
    traj = Trajectory(times=times, states=np.tile(state, (1200, 1)),
                      terminal=Event("NONE"))
    ev = detect_events(traj, eco_ref)
    assert ev.kind == "CONVERGED"
    assert np.allclose(ev.state, state)


def test_oscillating_regimes():
    traj, _ = run_recipe("015")
    assert traj.terminal.kind == "OSCILLATING"
    assert traj.terminal.period == pytest.approx(60.0, rel=0.1)
    traj, _ = run_recipe("005")
    assert traj.terminal.kind == "OSCILLATING"
    pm = phase_metrics(traj)
    assert abs(pm.lag_fraction - 0.5) <= 0.1      # anti-phase cycles
    assert pm.spacing_cv < 0.2


def _sine_traj(phase2, n=20000, periods=20.0, period=6.0):
    t = np.linspace(0.0, period * periods, n)
    x1 = 1.5 + np.sin(2 * np.pi * t / period)
    x2 = 1.5 + np.sin(2 * np.pi * t / period + phase2)
    traj = Trajectory(times=t, states=np.column_stack([x1, x2]),
                      terminal=Event("NONE"))
    traj.terminal = detect_events(traj)
    return traj


def test_phase_metrics_antiphase_sine_exact():
    traj = _sine_traj(math.pi)
    assert traj.terminal.kind == "OSCILLATING"
    pm = phase_metrics(traj)
    assert abs(pm.lag_fraction - 0.5) < 1e-6
    assert abs(pm.lag_trough - 0.5) < 1e-6
    assert abs(pm.lag_spectral - 0.5) < 1e-3


def test_phase_metrics_known_offset_sine():
    pm = phase_metrics(_sine_traj(-math.pi / 3))
    assert pm.lag_fraction == pytest.approx(1.0 / 6.0, abs=1e-6)
    assert pm.lag_signed == pytest.approx(1.0 / 6.0, abs=1e-6)


def test_phase_metrics_requires_oscillation(eco_ref):
    spec = SimSpec(y0=(0.5, 2.0), t_end=500.0)
    traj = integrate(spec, eco_ref)
    with pytest.raises(NotOscillatingError):
        phase_metrics(traj)


def test_positive_invariance_and_absorbing_set():
    rng = np.random.default_rng(23)
    for _ in range(20):
        p = draw_eco(rng, h_min=0.2)
        if p.r2 < 0.05:
            continue
        bound1 = p.K1
        bound2 = p.K2 * (p.r2 + p.e / p.h) / p.r2
        y0 = (rng.uniform(0, 2 * bound1), rng.uniform(0, 2 * bound2))
        traj = integrate(SimSpec(y0=y0, t_end=400.0 / min(p.r1, 0.5)), p)
        assert np.min(traj.states) >= -1e-10
        inside = ((traj.states[:, 0] <= 1.01 * bound1)
                  & (traj.states[:, 1] <= 1.01 * bound2))
        entered = np.argmax(inside)
        assert inside[entered:].all()


def test_tolerance_halving_stability():
    cfg = gaussian_cfg(0.5)
    finals = []
    for rtol in (2e-9, 1e-9):
        spec = SimSpec(y0=(0.5, 2.0, 1.0, 0.1), t_end=6000.0,
                       rtol=rtol, atol=rtol * 1e-2)
        traj = integrate(spec, cfg)
        assert traj.terminal.kind == "CONVERGED"
        finals.append(np.array(traj.final_state))
    assert np.max(np.abs(finals[0] - finals[1])) < 10 * 2e-9 + 1e-8


def test_facultative_reduction_trajectories_agree():
    p = EcoParams(r1=1.0, r2=0.4, K1=1.0, K2=1.5, a=2.0, h=1.0, e=0.6, d=0.15)
    q = p.facultative_reduction()
    spec = SimSpec(y0=(0.7, 0.9), t_end=300.0, conv_tol=-1.0, detect=False)
    ta = integrate(spec, p)
    tb = integrate(spec, q)
    grid = np.linspace(0.0, 300.0, 600)
    for k in range(2):
        fa = np.interp(grid, ta.times, ta.states[:, k])
        fb = np.interp(grid, tb.times, tb.states[:, k])
        assert np.max(np.abs(fa - fb)) < 1e-5


def test_spec_validation():
    with pytest.raises(ValueError):
        SimSpec(y0=(0.5, 0.5), t_end=-1.0)
    with pytest.raises(ValueError):
        SimSpec(y0=(0.5, 0.5), t_end=1.0, rtol=1e-2)
    with pytest.raises(ValueError):
        SimSpec(y0=(-0.5, 0.5), t_end=1.0)
    with pytest.raises(ValueError):
        integrate(SimSpec(y0=(0.5, 0.5, 0.1), t_end=1.0),
                  EcoParams(r1=1, r2=0.5, K1=1, K2=1, a=1, h=1, e=0.5, d=0.1))


def test_csv_roundtrip(tmp_path, eco_ref):
    traj = integrate(SimSpec(y0=(0.5, 2.0), t_end=50.0), eco_ref)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert list(data.dtype.names) == ["t", "x1", "x2"]
    assert np.array_equal(data["t"], traj.times)
    assert np.array_equal(data["x1"], traj.states[:, 0])
    sidecar = tmp_path / "traj.json"
    traj.write_sidecar(sidecar)
    import json
    meta = json.loads(sidecar.read_text())
    assert meta["terminal"]["kind"] == traj.terminal.kind
    assert meta["model"] == eco_ref.to_dict()


def test_decimation_keeps_row_cap(eco_ref):
    spec = SimSpec(y0=(0.5, 2.0), t_end=2000.0, max_rows=256,
                   conv_tol=-1.0, detect=False)
    traj = integrate(spec, eco_ref)
    assert len(traj.times) <= 256
    assert traj.times[0] == 0.0 and traj.times[-1] == 2000.0
    assert np.all(np.diff(traj.times) > 0)
