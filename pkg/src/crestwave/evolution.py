"""Time integration of the interface equations in Riemann-map coordinates.

In the moving frame the prognostic fields obey

    dW/dt    = Z_t - b Z_alpha
    dVbar/dt = Ztt_bar - b dVbar/dalpha

with ``Ztt_bar = i - i A1 / Z_alpha``. Steps are classical RK4 followed by an
exponential filter and a projection back onto holomorphic data.
"""

from dataclasses import dataclass, field, asdict
import math
import time

import numpy as np
from scipy.optimize import curve_fit

from . import spectral as sp
from .energy import energy
from .initdata import ICDescriptor, make_ic
from .state import (DEFAULT_TOL, InterfaceState, Tolerances, compute_a1, compute_b,
                    compute_ztt, derive, enforce_holomorphic)

__all__ = ["RunConfig", "RunResult", "StepError", "rhs", "step", "spectral_filter",
           "cfl_dt", "run", "dominant_period"]


class StepError(RuntimeError):
    """A step produced non-finite samples."""

    def __init__(self, message, t, index, result=None):
        super().__init__(f"{message} (t={t:.6g}, step {index})")
        self.t = t
        self.index = index
        self.result = result


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = 128
    dt: float | None = 1e-3
    cfl: float = 0.5
    t_end: float = 1.0
    filter_order: int = 36
    filter_strength: float = math.log(1e16)
    reproject_every: int = 1
    output_cadence: float = 0.1
    ic: ICDescriptor = field(default_factory=ICDescriptor)
    anchor_alpha0: float = 0.0
    seed: int = 0
    snapshot_times: tuple = ()
    holo_tol: float = 1e-8
    a1_tol: float = 1e-9
    gauge_tol: float = 1e-8

    def __post_init__(self):
        sp.PeriodicGrid(self.grid_n)
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive (or null for CFL stepping)")
        if self.dt is None and not self.cfl > 0:
            raise ValueError("cfl must be positive")
        if not self.output_cadence > 0:
            raise ValueError("output_cadence must be positive")
        if self.reproject_every < 1:
            raise ValueError("reproject_every must be >= 1")
        if isinstance(self.ic, dict):
            ic = dict(self.ic)
            if ic.get("kind") == "random":
                ic.setdefault("seed", self.seed)
            object.__setattr__(self, "ic", ICDescriptor.from_dict(ic))
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))

    @property
    def tolerances(self):
        return Tolerances(self.holo_tol, self.a1_tol, self.gauge_tol)

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown configuration keys: {sorted(extra)}")
        return cls(**d)

    def to_dict(self):
        d = asdict(self)
        d["snapshot_times"] = list(self.snapshot_times)
        return d


def rhs(s, tol=DEFAULT_TOL):
    """Frame time derivatives ``(dW/dt, dVbar/dt)`` of state ``s``."""
    A1 = compute_a1(s, tol)
    _, ztt_bar = compute_ztt(s, A1)
    b, _ = compute_b(s, tol)
    dW = s.Zt - sp.product(b, s.Zp)
    dV = ztt_bar - sp.product(b, sp.spectral_derivative(s.Vbar))
    return dW, dV


def spectral_filter(f, order=36, strength=math.log(1e16)):
    """Multiply modes by ``exp(-strength (|k| / (n/2))^order)``; ``order=0`` disables."""
    if order == 0 or strength == 0:
        return np.asarray(f, dtype=complex)
    n = np.size(f)
    k = np.abs(sp.PeriodicGrid(n).wavenumbers)
    sigma = np.exp(-strength * (k / (n // 2)) ** order)
    return np.fft.ifft(np.fft.fft(f) * sigma)


def step(s, dt, tol=DEFAULT_TOL, filter_order=36, filter_strength=math.log(1e16),
         reproject=True):
    """One RK4 step, then filtering and (optionally) holomorphic projection.

    Returns ``(state, drift)`` where ``drift`` is the size of the projection.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")

    def stage(base, k, h):
        return InterfaceState(base.W + h * k[0], base.Vbar + h * k[1], base.t + h)

    k1 = rhs(s, tol)
    k2 = rhs(stage(s, k1, dt / 2), tol)
    k3 = rhs(stage(s, k2, dt / 2), tol)
    k4 = rhs(stage(s, k3, dt), tol)
    W = s.W + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    V = s.Vbar + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    W = spectral_filter(W, filter_order, filter_strength)
    V = spectral_filter(V, filter_order, filter_strength)
    out = InterfaceState(W, V, s.t + dt)
    drift = 0.0
    if reproject:
        out, drift = enforce_holomorphic(out)
    return out, drift


def cfl_dt(s, cfl=0.5, tol=DEFAULT_TOL):
    """Largest step allowed by ``dt <= cfl (2/n) / max(1, |b|_inf + |Z_t|_inf)``."""
    b, _ = compute_b(s, tol)
    speed = max(1.0, sp.sup_norm(b) + sp.sup_norm(s.Vbar))
    return cfl * (2.0 / s.n) / speed


@dataclass
class RunResult:
    config: RunConfig
    energies: list = field(default_factory=list)
    probe: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    final: InterfaceState | None = None
    steps: int = 0
    min_A1: float = math.inf
    max_holo_drift: float = 0.0
    wall_time: float = 0.0
    status: str = "running"
    error: str | None = None

    @property
    def times(self):
        return np.array([e.t for e in self.energies])

    @property
    def totals(self):
        return np.array([e.total for e in self.energies])

    def summary(self):
        out = {
            "status": self.status,
            "t_final": None if self.final is None else self.final.t,
            "steps": self.steps,
            "min_A1": self.min_A1,
            "max_holo_drift": self.max_holo_drift,
            "wall_time": self.wall_time,
        }
        if self.error:
            out["error"] = self.error
        if self.config.ic.kind == "mode":
            k = -self.config.ic.k
            linear = 2 * math.pi / math.sqrt(math.pi * k)
            out["linear_period"] = linear
            out["measured_period"] = None
            t, y = np.array(self.probe).T if self.probe else (np.zeros(0), np.zeros(0))
            # a fit over less than one and a half periods is not trustworthy
            if len(t) >= 8 and t[-1] - t[0] >= 1.5 * linear:
                try:
                    out["measured_period"] = dominant_period(t, y)
                except (RuntimeError, ValueError):
                    pass
        return out


def _emit(cfg, s, d, drift, result, sink):
    rep = energy(s, d, cfg.anchor_alpha0).replace(holo_drift=drift)
    result.energies.append(rep)
    j = s.grid.index_of(cfg.anchor_alpha0)
    result.probe.append((s.t, float(np.real(s.W[j]))))
    if sink is not None:
        sink.energy(rep)


def run(cfg, sink=None, state=None):
    """Integrate from the configured initial state to ``t_end``.

    ``sink``, if given, receives ``energy(report)`` at each output time and
    ``snapshot(state)`` at each snapshot time as the run proceeds, so a
    failed run leaves its partial output behind. A step failure raises
    `StepError` carrying the partial `RunResult`.
    """
    tol = cfg.tolerances
    start = time.perf_counter()
    result = RunResult(cfg)
    s = state if state is not None else make_ic(cfg.grid_n, cfg.ic)
    if s.n != cfg.grid_n:
        raise ValueError("initial state does not match grid_n")

    eps = 1e-12 * max(1.0, cfg.t_end)
    outputs = [min(i * cfg.output_cadence, cfg.t_end)
               for i in range(int(math.floor(cfg.t_end / cfg.output_cadence + 1e-9)) + 1)]
    if outputs[-1] < cfg.t_end - eps:
        outputs.append(cfg.t_end)
    snaps = sorted(t for t in cfg.snapshot_times if 0 <= t <= cfg.t_end + eps)
    marks = sorted(set(outputs) | set(snaps))

    def visit(s, drift):
        if any(abs(s.t - t) <= eps for t in outputs):
            d = derive(s, tol, transport=False)
            result.min_A1 = min(result.min_A1, float(np.min(d.A1)))
            _emit(cfg, s, d, drift, result, sink)
        if any(abs(s.t - t) <= eps for t in snaps):
            result.snapshots[s.t] = s
            if sink is not None:
                sink.snapshot(s)

    visit(s, 0.0)
    window_drift = 0.0
    index = 0
    try:
        for target in marks[1:]:
            while s.t < target - eps:
                h = cfg.dt if cfg.dt is not None else cfl_dt(s, cfg.cfl, tol)
                h = min(h, target - s.t)
                index += 1
                try:
                    new, drift = step(s, h, tol, cfg.filter_order, cfg.filter_strength,
                                      reproject=index % cfg.reproject_every == 0)
                except ValueError as exc:
                    raise StepError(str(exc), s.t, index) from exc
                if not (np.all(np.isfinite(new.W)) and np.all(np.isfinite(new.Vbar))):
                    raise StepError("non-finite samples", s.t, index)
                if abs(new.t - target) <= eps:
                    new = new.replace(t=target)
                s = new
                result.steps = index
                window_drift = max(window_drift, drift)
                result.max_holo_drift = max(result.max_holo_drift, drift)
            visit(s, window_drift)
            if any(abs(s.t - t) <= eps for t in outputs):
                window_drift = 0.0
    except StepError as exc:
        result.status = "failed"
        result.error = str(exc)
        result.final = s
        result.wall_time = time.perf_counter() - start
        exc.result = result
        raise
    result.final = s
    result.status = "ok"
    result.wall_time = time.perf_counter() - start
    return result


def dominant_period(t, y):
    """Period of the dominant oscillation in the samples ``y(t)``.

    A sinusoid plus a linear trend is fitted by least squares, seeded from
    the peak of the zero-padded spectrum of the detrended samples.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 8:
        raise ValueError("too few samples to estimate a period")
    trend = np.polyfit(t, y, 1)
    y0 = y - np.polyval(trend, t)
    scale = np.max(np.abs(y0))
    if scale <= 1e-12 * max(1e-300, np.max(np.abs(y))):
        raise ValueError("signal has no oscillation")
    dt = np.mean(np.diff(t))
    m = 16 * t.size
    spec = np.abs(np.fft.rfft(y0, m))
    freqs = np.fft.rfftfreq(m, dt)
    spec[0] = 0.0
    f0 = freqs[np.argmax(spec)]
    if f0 == 0:
        raise ValueError("no oscillation found")

    def model(t, a, b, c, d, w):
        return a * np.sin(w * t) + b * np.cos(w * t) + c + d * t

    p0 = [1.0, 0.0, 0.0, 0.0, 2 * np.pi * f0]
    popt, _ = curve_fit(model, t, y0 / scale, p0=p0, maxfev=20000)
    return float(2 * np.pi / abs(popt[4]))
