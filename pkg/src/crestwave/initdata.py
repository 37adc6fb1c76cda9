"""Initial interface states: flat rest, single velocity modes, random
holomorphic data and angled crests."""

from dataclasses import dataclass, asdict
import math

import numpy as np
from scipy.special import binom

from . import spectral as sp
from .state import InterfaceState, enforce_holomorphic

__all__ = ["ICDescriptor", "make_ic", "random_state", "crest_series", "crest_profile"]

KINDS = ("flat", "mode", "random", "crest")

# Gaussian taper on the crest series: the last retained mode is damped to
# about 1e-16, so truncation at n/2 is invisible on the grid.
CREST_TAPER = math.log(1e16)


@dataclass(frozen=True)
class ICDescriptor:
    """Which initial state to build.

    ``kind`` is one of ``flat``, ``mode``, ``random``, ``crest``. ``mode``
    uses ``k`` (negative) and ``eps``; ``random`` uses ``max_mode``,
    ``amplitude`` and ``seed``; ``crest`` uses ``r``, ``c`` and
    ``crest_location`` (``"corner"`` or an interior point). ``symmetric``
    selects data with ``W(-a) = -conj(W(a))`` where the kind allows it.
    """

    kind: str = "flat"
    k: int = -1
    eps: float = 0.0
    max_mode: int | None = None
    amplitude: float = 0.05
    seed: int = 0
    r: float = 2.5
    c: float = 1.0
    crest_location: str | float = "corner"
    symmetric: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown initial condition kind {self.kind!r}")
        if self.kind == "mode" and self.k >= 0:
            raise ValueError("velocity mode must have k < 0 to be holomorphic")
        if self.eps < 0 or self.amplitude < 0:
            raise ValueError("amplitudes must be nonnegative")
        if self.kind == "crest":
            if not self.r > 1:
                raise ValueError(f"crest exponent must satisfy r > 1, got {self.r}")
            if self.c <= 0:
                raise ValueError("crest amplitude must be positive")
            loc = self.crest_location
            if loc != "corner" and not (isinstance(loc, (int, float)) and -1 < loc < 1):
                raise ValueError(f"crest_location must be 'corner' or in (-1, 1), got {loc!r}")

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown initial condition keys: {sorted(extra)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)


def _exp_modes(n, coeffs, shift=0.0):
    """Samples of ``sum_m coeffs[m] exp(-i pi m (a - shift))`` for m = 0, 1, ..."""
    c = np.zeros(n, dtype=complex)
    m = np.arange(len(coeffs))
    c[(-m) % n] = np.asarray(coeffs) * np.exp(1j * np.pi * m * shift)
    # the FFT grid starts at a = -1, where exp(-i pi m a) = (-1)^m
    c *= np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return np.fft.ifft(c) * n


def random_state(n, max_mode=None, amplitude=0.05, seed=0, symmetric=False, t=0.0,
                 decay=2.5):
    """Random holomorphic state with coefficients decaying like ``(1+|k|)^-decay``.

    Draws are made row by row in ``|k|``, so two resolutions sharing a seed
    and ``max_mode`` produce the same function. The energy stays bounded
    under refinement only for ``decay`` above about 3.5.
    """
    if max_mode is None:
        max_mode = n // 4 - 1
    if not 1 <= max_mode < n // 2:
        raise ValueError(f"max_mode must lie in [1, n/2), got {max_mode}")
    rng = np.random.default_rng(seed)
    m0 = rng.uniform(-1, 1, 2)
    draws = rng.uniform(-1, 1, (max_mode, 4))
    m = np.arange(1, max_mode + 1)
    scale = amplitude / (1.0 + m) ** decay
    if symmetric:
        v = 1j * draws[:, 0] * scale
        w = 1j * draws[:, 2] * scale
        w0 = 1j * amplitude * m0[0]
    else:
        v = draws[:, 0] * (1 + 1j * draws[:, 1]) * scale
        w = draws[:, 2] * (1 + 1j * draws[:, 3]) * scale
        w0 = amplitude * (m0[0] + 1j * m0[1])
    V = _exp_modes(n, np.concatenate([[0.0], v]))
    W = _exp_modes(n, np.concatenate([[w0], w]))
    return InterfaceState(W, V, t)


def crest_series(n, r, taper=CREST_TAPER):
    """Coefficients of ``Z_alpha = (1 + exp(-i pi a))^(1/r - 1)`` for modes 0..n/2-1.

    The binomial series is tapered by ``exp(-taper (m / (n/2))^2)``.
    """
    if not r > 1:
        raise ValueError(f"crest exponent must satisfy r > 1, got {r}")
    p = 1.0 - 1.0 / r
    m = np.arange(n // 2)
    coeffs = binom(-p, m) * np.exp(-taper * (m / (n // 2)) ** 2)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("crest series coefficients are not finite")
    return coeffs


def crest_profile(x, r, c=1.0, location=-1.0):
    """Exact ``1/Z_alpha = c (1 + exp(-i pi (x - s)))^(1 - 1/r)``, crest at ``location``."""
    s = location + 1.0
    base = 1.0 + np.exp(-1j * np.pi * (np.asarray(x) - s))
    return c * base ** (1.0 - 1.0 / r)


def _crest(n, d):
    coeffs = crest_series(n, d.r)
    # The map must satisfy Z(1) - Z(-1) = 2, i.e. mean(Z_alpha) = 1; the
    # zeroth coefficient fixes the scale of 1/Z_alpha.
    scale = coeffs[0]
    if not np.isfinite(scale) or scale <= 0:
        raise ValueError("crest normalization did not converge")
    coeffs = coeffs / scale
    m = np.arange(1, n // 2)
    w = coeffs[1:] / (-1j * np.pi * m)
    shift = 0.0 if d.crest_location == "corner" else d.crest_location + 1.0
    W = _exp_modes(n, np.concatenate([[0.0], w]), shift)
    s = InterfaceState(W, np.zeros(n), 0.0)
    if np.any(np.abs(s.Zp) < 1e-300):
        raise ValueError("crest map has a vanishing derivative on the grid")
    return s


def make_ic(grid, d):
    """Build the initial state described by ``d`` on ``grid``.

    ``grid`` may be a `PeriodicGrid` or a sample count.
    """
    n = grid.n if isinstance(grid, sp.PeriodicGrid) else sp.PeriodicGrid(int(grid)).n
    if isinstance(d, dict):
        d = ICDescriptor.from_dict(d)
    if d.kind == "flat":
        s = InterfaceState(np.zeros(n), np.zeros(n))
    elif d.kind == "mode":
        if -d.k >= n // 2:
            raise ValueError(f"mode {d.k} is not resolved on n={n}")
        x = sp.PeriodicGrid(n).points
        amp = 1j * d.eps if d.symmetric else d.eps
        s = InterfaceState(np.zeros(n), amp * np.exp(1j * np.pi * d.k * x))
    elif d.kind == "random":
        s = random_state(n, d.max_mode, d.amplitude, d.seed, d.symmetric)
    else:
        s = _crest(n, d)
    s, drift = enforce_holomorphic(s)
    if drift > 1e-8:
        raise ValueError(f"initial state is not holomorphic (drift {drift:.3g})")
    return s
