import math

import numpy as np
import pytest

from crestwave import InterfaceState, RunConfig, StepError, make_ic, random_state, run, step
from crestwave.evolution import cfl_dt, dominant_period, rhs, spectral_filter
from crestwave.state import compute_b


def mirror(f):
    return f[(-np.arange(f.size)) % f.size]


def test_flat_state_does_not_move():
    s = make_ic(32, {"kind": "flat"})
    for _ in range(50):
        s, drift = step(s, 1e-2)
    assert np.abs(s.W).max() + np.abs(s.Vbar).max() == 0.0
    assert s.t == pytest.approx(0.5)


def test_rhs_of_mode_state():
    # W = 0: dW/dt = Zt - b, dVbar/dt = Ztt_bar - b Vbar'
    eps = 0.01
    s = make_ic(64, {"kind": "mode", "k": -1, "eps": eps})
    x = s.grid.points
    dW, dV = rhs(s)
    b = 2 * eps * (1 + np.cos(np.pi * x))
    assert np.abs(dW - (np.conj(s.Vbar) - b)).max() < 1e-15
    dVbar = -1j * np.pi * s.Vbar
    assert np.abs(dV - (-1j * np.pi * eps ** 2 - b * dVbar)).max() < 1e-15


def test_rk4_self_convergence():
    s0 = random_state(64, max_mode=8, amplitude=0.1, seed=1, decay=5.0)

    def final(dt, T=0.4):
        s = s0
        for _ in range(int(round(T / dt))):
            s, _ = step(s, dt, filter_order=0)
        return np.concatenate([s.W, s.Vbar])

    a, b, c = final(0.04), final(0.02), final(0.01)
    ratio = np.abs(a - b).max() / np.abs(b - c).max()
    assert 14 < ratio < 18


def test_symmetry_is_preserved():
    s = make_ic(128, {"kind": "random", "symmetric": True, "seed": 2})
    for _ in range(100):
        s, _ = step(s, 5e-3)
    assert np.abs(mirror(s.W) + np.conj(s.W)).max() < 1e-13
    assert np.abs(mirror(s.Vbar) + np.conj(s.Vbar)).max() < 1e-13


def test_holomorphic_drift_per_step_is_small():
    s = random_state(256, seed=3, decay=4.0)
    _, drift = step(s, 1e-3)
    assert drift <= 1e-9


def test_step_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        step(make_ic(16, {"kind": "flat"}), 0.0)


def test_filter():
    x = np.linspace(-1, 1, 64, endpoint=False)
    f = np.exp(-1j * np.pi * x) + np.exp(-31j * np.pi * x)
    g = spectral_filter(f)
    # the top mode is damped by exp(-strength (31/32)^36), the first is untouched
    c = np.fft.fft(g) / 64
    assert abs(abs(c[-1]) - 1) < 1e-15
    assert abs(c[-31]) == pytest.approx(np.exp(-np.log(1e16) * (31 / 32) ** 36))
    assert np.all(spectral_filter(f, order=0) == f)


def test_cfl_rule():
    eps = 0.05
    s = make_ic(64, {"kind": "mode", "k": -1, "eps": eps})
    b, _ = compute_b(s)
    speed = max(1.0, np.abs(b).max() + eps)
    assert cfl_dt(s, 0.5) == pytest.approx(0.5 * (2 / 64) / speed)


def test_dominant_period():
    t = np.linspace(0, 10, 201)
    assert dominant_period(t, np.sin(2 * np.pi * t / 3.3) + 0.2) == pytest.approx(3.3, rel=1e-8)
    drifting = np.cos(2 * np.pi * t / 3.3) + 0.8 * t
    assert dominant_period(t[:120], drifting[:120]) == pytest.approx(3.3, rel=1e-8)
    with pytest.raises(ValueError):
        dominant_period(t, 1 + 2 * t)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(grid_n=100)
    with pytest.raises(ValueError):
        RunConfig(dt=-1.0)
    with pytest.raises(ValueError):
        RunConfig.from_dict({"grid_n": 64, "speed": 3})
    cfg = RunConfig.from_dict({"ic": {"kind": "random"}, "seed": 7})
    assert cfg.ic.seed == 7
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


def test_flat_run_rows_are_identical():
    r = run(RunConfig(grid_n=32, dt=1e-2, t_end=1.0, output_cadence=0.1))
    assert len(r.energies) == 11
    rows = np.array([e.row()[1:] for e in r.energies])
    assert np.all(rows == rows[0])
    assert np.allclose(r.times, np.linspace(0, 1, 11), atol=1e-12)
    assert r.status == "ok" and r.steps == 100


def test_outputs_land_on_cadence_with_cfl_steps():
    cfg = RunConfig(grid_n=64, dt=None, t_end=0.25, output_cadence=0.1, snapshot_times=(0.15,),
                    ic={"kind": "mode", "k": -1, "eps": 0.05})
    r = run(cfg)
    assert list(r.times) == [0.0, 0.1, 0.2, 0.25]
    assert list(r.snapshots) == [0.15]
    assert r.final.t == 0.25


def test_energy_is_nearly_conserved_in_short_run():
    cfg = RunConfig(grid_n=64, dt=None, t_end=0.5, output_cadence=0.1,
                    ic={"kind": "mode", "k": -1, "eps": 0.02})
    E = run(cfg).totals
    assert np.all(np.abs(E / E[0] - 1) < 0.05)


class Collect:
    def __init__(self):
        self.rows, self.snaps = [], []

    def energy(self, rep):
        self.rows.append(rep)

    def snapshot(self, s):
        self.snaps.append(s.t)


def test_failed_run_keeps_partial_result():
    sink = Collect()
    cfg = RunConfig(grid_n=64, dt=0.5, t_end=20, output_cadence=0.5,
                    ic={"kind": "mode", "k": -3, "eps": 0.3})
    with pytest.raises(StepError) as info:
        run(cfg, sink)
    res = info.value.result
    assert res.status == "failed" and res.error
    assert len(sink.rows) == len(res.energies) >= 1


def test_mode_run_reports_period():
    cfg = RunConfig(grid_n=64, dt=0.02, t_end=6.0, output_cadence=0.05,
                    ic={"kind": "mode", "k": -1, "eps": 1e-4})
    summary = run(cfg).summary()
    assert summary["linear_period"] == pytest.approx(2 * math.sqrt(math.pi))
    assert summary["measured_period"] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-3)


def test_short_mode_run_does_not_guess_a_period():
    cfg = RunConfig(grid_n=32, dt=0.05, t_end=1.0, output_cadence=0.05,
                    ic={"kind": "mode", "k": -1, "eps": 1e-4})
    assert run(cfg).summary()["measured_period"] is None


def test_initial_state_must_match_grid():
    with pytest.raises(ValueError):
        run(RunConfig(grid_n=32), state=InterfaceState(np.zeros(64), np.zeros(64)))
