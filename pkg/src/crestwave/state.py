"""Interface state in Riemann-map coordinates and its derived fields.

The prognostic pair is ``W = Z - alpha`` (periodic part of the surface
parametrization) and ``Vbar = conj(Z_t)``. Everything else, including the
acceleration, the frame velocity ``b`` and the weight ``A1``, is a function
of the pair at one instant.
"""

from dataclasses import dataclass, field, replace
import warnings

import numpy as np

from . import spectral as sp

__all__ = [
    "Tolerances",
    "InterfaceState",
    "DerivedState",
    "compute_a1",
    "a1_quadrature",
    "compute_ztt",
    "compute_b",
    "b_direct",
    "compute_At",
    "compute_at_over_a",
    "derive",
    "enforce_holomorphic",
    "holomorphic_defect",
    "controlled_quantities",
    "GaugeWarning",
]


class GaugeWarning(RuntimeWarning):
    """The derivative of ``b`` had a mean above ``gauge_tol`` before removal."""


@dataclass(frozen=True)
class Tolerances:
    holo_tol: float = 1e-8
    a1_tol: float = 1e-9
    gauge_tol: float = 1e-8


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class InterfaceState:
    """Samples of ``W`` and ``Vbar`` at time ``t``."""

    W: np.ndarray
    Vbar: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        W = np.array(self.W, dtype=complex)
        V = np.array(self.Vbar, dtype=complex)
        sp.grid_size(W, V)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(V))):
            raise ValueError("state has non-finite samples")
        W.flags.writeable = False
        V.flags.writeable = False
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "Vbar", V)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self):
        return self.W.size

    @property
    def grid(self):
        return sp.PeriodicGrid(self.n)

    @property
    def Zt(self):
        return np.conj(self.Vbar)

    @property
    def Zp(self):
        return 1.0 + sp.spectral_derivative(self.W)

    def replace(self, **changes):
        return replace(self, **changes)


def holomorphic_defect(s):
    """``(velocity defect, map defect)`` of the holomorphicity invariants."""
    v = max(sp.sup_norm(sp.project(s.Vbar, "antiholomorphic")), abs(sp.mean(s.Vbar)))
    w = sp.sup_norm(sp.project(s.W, "antiholomorphic") - 0.5 * sp.mean(s.W))
    return v, w


def _zp_inv(Zp):
    # The exact reciprocal is holomorphic; the sample-wise one carries the
    # modes below -n/2 aliased onto k > 0, which are removed here.
    if np.any(Zp == 0):
        raise ValueError("Z_alpha has a zero sample")
    c = np.fft.fft(1.0 / Zp)
    c[~_keep(Zp.size, True)] = 0.0
    return np.fft.ifft(c)


def compute_a1(s, tol=DEFAULT_TOL):
    """``A1 = 1 + Im(-[Z_t, H] dVbar)``, real."""
    vdef, _ = holomorphic_defect(s)
    if vdef > 100 * tol.holo_tol:
        raise ValueError(f"Vbar is not holomorphic (defect {vdef:.3g})")
    c = sp.commutator_H(s.Zt, sp.spectral_derivative(s.Vbar))
    return 1.0 + np.imag(-c)


def a1_quadrature(s):
    """``A1 = 1 + (pi/8) int |Z_t(a) - Z_t(b)|^2 / sin^2 db``, an independent path."""
    Q = sp.difference_quotient(s.Zt)
    return 1.0 + np.pi / 8 * (2.0 / s.n) * np.sum(np.abs(Q) ** 2, axis=1)


def compute_ztt(s, A1):
    """Return ``(Ztt, Ztt_bar)`` with ``Ztt_bar = i - i A1 / Z_alpha``."""
    A1 = np.asarray(A1)
    if np.iscomplexobj(A1):
        if np.max(np.abs(A1.imag)) > 1e-10:
            raise ValueError("A1 must be real")
        A1 = A1.real
    zp_inv = _zp_inv(s.Zp)
    ztt_bar = 1j - 1j * A1 * zp_inv
    return np.conj(ztt_bar), ztt_bar


def _gauge(b):
    # corners are fixed: b(-1) = b(1) = 0, and -1 is sample 0
    return np.real(b) - np.real(b[0])


def compute_b(s, tol=DEFAULT_TOL, dealias=True):
    """Frame velocity ``b`` and its derivative ``b'``.

    ``b'`` is assembled from commutators, its mean is removed and ``b`` is
    its antiderivative normalized by ``b(1) = 0``.
    """
    zp_inv = _zp_inv(s.Zp)
    Zt = s.Zt
    dV = sp.spectral_derivative(s.Vbar)
    DZt = sp.weighted_derivative(Zt, zp_inv, dealias)
    bp = (2 * np.real(DZt)
          + np.real(-sp.commutator_H(np.conj(zp_inv), dV)
                    + sp.commutator_H(Zt, sp.spectral_derivative(zp_inv))))
    drift = float(np.mean(bp))
    if abs(drift) > tol.gauge_tol:
        warnings.warn(f"mean of b' was {drift:.3g} before removal", GaugeWarning,
                      stacklevel=2)
    bp = bp - drift
    b = _gauge(sp.antiderivative(bp))
    return b, bp


def b_direct(s, dealias=True):
    """``b = Re (I - H)(Z_t / Z_alpha) + c`` with ``b(1) = 0``."""
    zp_inv = _zp_inv(s.Zp)
    q = sp.product(s.Zt, zp_inv) if dealias else s.Zt * zp_inv
    return _gauge(q - sp.hilbert(q))


def compute_At(s, d):
    """``At |Z_alpha|^2 = -Im(2[Z_t,H] dZtt_bar + 2[Z_tt,H] dVbar - [Z_t,Z_t; D Vbar])``."""
    Zt = s.Zt
    DV = sp.weighted_derivative(s.Vbar, d.Zp_inv)
    terms = (2 * sp.commutator_H(Zt, sp.spectral_derivative(d.Ztt_bar))
             + 2 * sp.commutator_H(d.Ztt, sp.spectral_derivative(s.Vbar))
             - sp.calderon_bracket(Zt, Zt, DV))
    return -np.imag(terms)


def compute_at_over_a(A1, At_abs2):
    """``At / A = At |Z_alpha|^2 / A1``."""
    A1 = np.real(A1)
    if np.min(A1) < 0.5:
        raise ValueError(f"A1 dropped to {np.min(A1):.3g}; state is corrupted")
    return np.real(At_abs2) / A1


@dataclass(frozen=True, eq=False)
class DerivedState:
    Zp: np.ndarray
    Zp_inv: np.ndarray
    A1: np.ndarray
    Ztt: np.ndarray
    Ztt_bar: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray
    taylor: np.ndarray
    calA: np.ndarray
    At_abs2: np.ndarray = field(default=None)
    at_over_a: np.ndarray = field(default=None)


def derive(s, tol=DEFAULT_TOL, transport=True):
    """All derived fields of ``s``.

    ``transport=False`` skips the O(n^2) time derivative of the Taylor
    coefficient, which the dynamics do not need.
    """
    Zp = s.Zp
    zp_inv = _zp_inv(Zp)
    A1 = compute_a1(s, tol)
    Ztt, Ztt_bar = compute_ztt(s, A1)
    b, bp = compute_b(s, tol)
    abs2 = np.abs(Zp) ** 2
    d = DerivedState(Zp=Zp, Zp_inv=zp_inv, A1=A1, Ztt=Ztt, Ztt_bar=Ztt_bar,
                     b=b, b_prime=bp, taylor=A1 / np.sqrt(abs2), calA=A1 / abs2)
    if transport:
        At = compute_At(s, d)
        d = replace(d, At_abs2=At, at_over_a=compute_at_over_a(A1, At))
    return d


def _keep(n, keep_mean):
    k = sp.PeriodicGrid(n).wavenumbers
    mask = k < 0
    mask[n // 2] = False
    if keep_mean:
        mask[0] = True
    return mask


def enforce_holomorphic(s):
    """Project onto holomorphic data; return ``(state, drift)``.

    ``Vbar`` keeps its negative modes only; ``W`` also keeps its mean. The
    ambiguous Nyquist mode is dropped from both.
    """
    n = s.n
    V = np.fft.ifft(np.fft.fft(s.Vbar) * _keep(n, False))
    W = np.fft.ifft(np.fft.fft(s.W) * _keep(n, True))
    drift = max(sp.sup_norm(V - s.Vbar), sp.sup_norm(W - s.W))
    return InterfaceState(W, V, s.t), drift


def controlled_quantities(s, d):
    """Norms of the quantities the a priori estimate keeps under control."""
    zp_inv = d.Zp_inv
    D = lambda f: sp.weighted_derivative(f, zp_inv)
    DV, DZtt_bar = D(s.Vbar), D(d.Ztt_bar)
    D2V = D(DV)
    return {
        "D2_Ztt_bar_L2": sp.l2_norm(D(DZtt_bar)),
        "D2_Ztt_L2": sp.l2_norm(D(D(d.Ztt))),
        "D2_Zt_bar_L2": sp.l2_norm(D2V),
        "D2_Zt_L2": sp.l2_norm(D(D(s.Zt))),
        "weighted_D2_Zt_bar_Hhalf": float(np.sqrt(sp.h_half_norm_sq(sp.product(zp_inv, D2V)))),
        "D_Ztt_bar_sup": sp.sup_norm(DZtt_bar),
        "D_Zt_bar_sup": sp.sup_norm(DV),
        "dZtt_bar_L2": sp.l2_norm(sp.spectral_derivative(d.Ztt_bar)),
        "dZt_bar_L2": sp.l2_norm(sp.spectral_derivative(s.Vbar)),
        "Zp_inv_sup": sp.sup_norm(zp_inv),
        "Ztt_plus_i_sup": sp.sup_norm(d.Ztt + 1j),
        "A1_sup": sp.sup_norm(d.A1),
    }
