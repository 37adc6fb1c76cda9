"""Periodic spectral toolkit on the interval [-1, 1].

Fields are complex numpy arrays of samples at the points
``alpha_j = -1 + 2 j / n``. The Fourier basis is ``exp(i pi k alpha)`` with
period 2, so a field is the boundary value of a function holomorphic in the
lower half-strip exactly when only the modes ``k <= 0`` are present.

Singular integrals with ``sin^-2`` kernels are evaluated by dense trapezoid
quadrature, which is exact for band-limited integrands once the removable
diagonal is filled with its analytic limit.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PeriodicGrid",
    "grid_size",
    "modes",
    "from_modes",
    "mean",
    "hilbert",
    "project",
    "spectral_derivative",
    "antiderivative",
    "product",
    "weighted_derivative",
    "h_half_norm_sq",
    "h_half_norm_sq_quadrature",
    "commutator_H",
    "calderon_bracket",
    "hardy_sup",
    "sin2_integral",
    "difference_quotient",
    "hilbert_quadrature",
    "l2_norm",
    "sup_norm",
    "weighted_l2_norm",
    "boundary_jump",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of ``n`` points on the period-2 interval [-1, 1).

    Parameters
    ----------
    n : int
        Number of samples, a power of two and at least 8.
    """

    n: int

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {n!r}")

    @property
    def spacing(self):
        return 2.0 / self.n

    @property
    def points(self):
        return _points(self.n)

    @property
    def wavenumbers(self):
        """Integer wavenumbers in numpy FFT order."""
        return _wavenumbers(self.n)

    def index_of(self, x, tol=1e-12):
        """Index of the grid point ``x``; raises if ``x`` is not on the grid."""
        j = (x + 1.0) / self.spacing
        jr = int(round(j))
        if abs(j - jr) > tol * self.n or not 0 <= jr % self.n < self.n:
            raise ValueError(f"{x!r} is not a point of the n={self.n} grid")
        return jr % self.n


@lru_cache(maxsize=None)
def _points(n):
    x = -1.0 + 2.0 * np.arange(n) / n
    x.flags.writeable = False
    return x


@lru_cache(maxsize=None)
def _wavenumbers(n):
    k = np.fft.fftfreq(n, 1.0 / n)
    k.flags.writeable = False
    return k


@lru_cache(maxsize=None)
def _resolved(n):
    # wavenumbers with the ambiguous Nyquist mode set to zero
    k = np.array(_wavenumbers(n))
    k[n // 2] = 0.0
    k.flags.writeable = False
    return k


@lru_cache(maxsize=None)
def _hilbert_multiplier(n):
    m = -np.sign(_resolved(n))
    m.flags.writeable = False
    return m


def grid_size(*fields):
    """Common length of ``fields``; raises ``ValueError`` on mismatch."""
    sizes = {np.shape(f)[-1] for f in fields}
    if len(sizes) != 1:
        raise ValueError(f"fields live on different grids: sizes {sorted(sizes)}")
    n = sizes.pop()
    PeriodicGrid(n)
    return n


def _field(f):
    f = np.asarray(f)
    if f.ndim != 1:
        raise ValueError("fields are one-dimensional sample arrays")
    grid_size(f)
    return f.astype(complex, copy=False)


def modes(f):
    """Coefficients of ``f`` in the basis ``exp(i pi k alpha)``.

    Returned for ``k = -n/2, ..., n/2 - 1`` in increasing order.
    """
    f = _field(f)
    n = f.size
    c = np.fft.fft(f) / n
    k = _wavenumbers(n)
    c = c * np.where(k % 2 == 0, 1.0, -1.0)
    return np.fft.fftshift(c)


def from_modes(c):
    """Samples of the field with centred coefficients ``c`` (inverse of `modes`)."""
    c = np.asarray(c, dtype=complex)
    n = grid_size(c)
    c = np.fft.ifftshift(c)
    c = c * np.where(_wavenumbers(n) % 2 == 0, 1.0, -1.0)
    return np.fft.ifft(c) * n


def mean(f):
    """Average of ``f`` over the period, i.e. the zeroth mode."""
    return complex(np.mean(_field(f)))


def _multiply(f, m):
    return np.fft.ifft(np.fft.fft(_field(f)) * m)


def hilbert(f):
    """Periodic Hilbert transform with multiplier ``-sign(k)``.

    The Nyquist mode is mapped to zero so that real fields have purely
    imaginary transforms.
    """
    f = _field(f)
    return _multiply(f, _hilbert_multiplier(f.size))


def project(f, side="holomorphic"):
    """Holomorphic ``(I + H)/2`` or antiholomorphic ``(I - H)/2`` projection."""
    Hf = hilbert(f)
    if side == "holomorphic":
        return 0.5 * (f + Hf)
    if side == "antiholomorphic":
        return 0.5 * (f - Hf)
    raise ValueError(f"unknown side {side!r}")


def spectral_derivative(f, order=1):
    """Derivative via the multiplier ``(i pi k)**order``."""
    f = _field(f)
    return _multiply(f, (1j * np.pi * _resolved(f.size)) ** order)


def antiderivative(f):
    """Mean-zero periodic antiderivative of ``f``; the mean of ``f`` is discarded."""
    f = _field(f)
    k = _resolved(f.size)
    mult = np.zeros(f.size, dtype=complex)
    nz = k != 0
    mult[nz] = 1.0 / (1j * np.pi * k[nz])
    return _multiply(f, mult)


def _pad(c, n):
    # coefficients of length n (FFT order) -> length 2n, Nyquist split evenly
    out = np.zeros(2 * n, dtype=complex)
    h = n // 2
    out[:h] = c[:h]
    out[-h + 1:] = c[h + 1:]
    out[h] = 0.5 * c[h]
    out[-h] = 0.5 * c[h]
    return out


def _truncate(C, n):
    c = np.empty(n, dtype=complex)
    h = n // 2
    c[:h] = C[:h]
    c[h + 1:] = C[-h + 1:]
    c[h] = 0.0
    return c


def product(*fields):
    """Dealiased pointwise product.

    Factors are zero-padded to ``2n`` points, multiplied there and truncated
    back to the ``n - 1`` modes ``|k| < n/2``; the ambiguous Nyquist mode is
    dropped, as everywhere else. Two and three factors are alias-free;
    longer products are folded pairwise.
    """
    if not fields:
        raise ValueError("product needs at least one factor")
    n = grid_size(*fields)
    if len(fields) > 3:
        head = product(*fields[:3])
        return product(head, *fields[3:])
    fine = np.ones(2 * n, dtype=complex)
    for f in fields:
        fine = fine * np.fft.ifft(_pad(np.fft.fft(_field(f)), n)) * 2
    return np.fft.ifft(_truncate(np.fft.fft(fine), n)) / 2


def weighted_derivative(f, zp_inv, dealias=True):
    """``(1/Z_alpha) d/dalpha f`` given the samples of ``1/Z_alpha``.

    With ``dealias=False`` the product is formed sample by sample, which is
    preferable when the weight itself is not resolved (angled crests).
    """
    df = spectral_derivative(f)
    if dealias:
        return product(zp_inv, df)
    return np.asarray(zp_inv) * df


def h_half_norm_sq(f):
    """Squared homogeneous half-derivative seminorm, ``2 pi sum |k| |f_k|^2``."""
    c = modes(f)
    k = np.arange(-c.size // 2, c.size // 2)
    return float(2 * np.pi * np.sum(np.abs(k) * np.abs(c) ** 2))


def h_half_norm_sq_quadrature(f):
    """Same seminorm as `h_half_norm_sq` from the double integral of
    ``(pi/8) |f(a) - f(b)|^2 / sin^2(pi (a - b) / 2)``. O(n^2)."""
    Q = difference_quotient(f)
    h = 2.0 / Q.shape[0]
    return float(np.pi / 8 * h * h * np.sum(np.abs(Q) ** 2))


def commutator_H(f, g):
    """``[f, H] g = f H g - H(f g)`` with dealiased products."""
    grid_size(f, g)
    return product(f, hilbert(g)) - hilbert(product(f, g))


@lru_cache(maxsize=8)
def _half_sine_matrix(n):
    x = _points(n)
    S = np.sin(0.5 * np.pi * (x[:, None] - x[None, :]))
    np.fill_diagonal(S, 1.0)
    S.flags.writeable = False
    return S


def boundary_jump(f):
    """Heuristic size of a jump of ``f`` across the periodic seam.

    The second difference straddling the seam is compared with the largest
    interior one; for sampled periodic data the two are of the same size.
    """
    f = _field(f)
    d2 = np.abs(f[2:] - 2 * f[1:-1] + f[:-2])
    seam = max(abs(f[1] - 2 * f[0] + f[-1]), abs(f[0] - 2 * f[-1] + f[-2]))
    interior = d2.max() if d2.size else 0.0
    return float(max(0.0, seam - 10 * interior))


def _require_periodic(f, name, tol):
    jump = boundary_jump(f)
    if jump > tol:
        raise ValueError(f"{name} jumps across the periodic seam by ~{jump:.3g}; "
                         "the sin^-2 kernel is not integrable")


def difference_quotient(f, check=True, tol=1e-6):
    """Matrix ``(f(a) - f(b)) / sin(pi (a - b) / 2)`` on the grid.

    The diagonal holds the limit ``(2/pi) f'(a)``.
    """
    f = _field(f)
    if check:
        _require_periodic(f, "field", tol)
    n = f.size
    Q = (f[:, None] - f[None, :]) / _half_sine_matrix(n)
    np.fill_diagonal(Q, 2.0 / np.pi * spectral_derivative(f))
    return Q


def calderon_bracket(f, g, h):
    """``[f, g; h](a) = (pi/4i) int (f(a)-f(b))(g(a)-g(b)) / sin^2 h(b) db``."""
    n = grid_size(f, g, h)
    Qf = difference_quotient(f)
    Qg = Qf if g is f else difference_quotient(g)
    step = 2.0 / n
    return np.pi / 4j * step * ((Qf * Qg) @ _field(h))


def hardy_sup(f):
    """``sup_a int |f(a) - f(b)|^2 / sin^2(pi (a - b) / 2) db``."""
    Q = difference_quotient(f)
    return float(np.max(np.sum(np.abs(Q) ** 2, axis=1)) * 2.0 / Q.shape[0])


def sin2_integral(f, g):
    """Principal value ``int (f(a) - f(b)) / sin^2(pi (a - b) / 2) g(b) db``.

    The odd part of the kernel is split off as ``(2/pi) f'(a) cot``, whose
    principal value is ``2i (2/pi) f'(a) H g``; the remainder is smooth.
    """
    n = grid_size(f, g)
    f, g = _field(f), _field(g)
    _require_periodic(f, "field", 1e-6)
    x = _points(n)
    d = 0.5 * np.pi * (x[:, None] - x[None, :])
    S = _half_sine_matrix(n)
    df = spectral_derivative(f)
    R = ((f[:, None] - f[None, :]) / S - 2 / np.pi * df[:, None] * np.cos(d)) / S
    np.fill_diagonal(R, -2 / np.pi ** 2 * spectral_derivative(f, 2))
    smooth = (2.0 / n) * (R @ g)
    return smooth + 2j * (2 / np.pi) * df * hilbert(g)


def hilbert_quadrature(f):
    """Hilbert transform by the alternating-point trapezoid rule.

    ``(1/2i) pv int cot(pi (a - b)/2) f(b) db`` is summed over the grid
    points of opposite parity to ``a`` with weight ``4/n``. Independent of
    the Fourier multiplier and used as its oracle.
    """
    f = _field(f)
    n = f.size
    j = np.arange(n)
    odd = (j[:, None] - j[None, :]) % 2 == 1
    x = _points(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(odd, 1.0 / np.tan(0.5 * np.pi * (x[:, None] - x[None, :])), 0.0)
    return (4.0 / n) * (K @ f) / 2j


def l2_norm(f):
    """``(int |f|^2)^(1/2)`` by the trapezoid rule."""
    f = _field(f)
    return float(np.sqrt(2.0 / f.size * np.sum(np.abs(f) ** 2)))


def sup_norm(f):
    """Grid maximum of ``|f|``."""
    return float(np.max(np.abs(f)))


def weighted_l2_norm(f, w):
    """``(int |f|^2 w)^(1/2)`` for a real nonnegative weight ``w``."""
    grid_size(f, w)
    w = np.asarray(w)
    if np.iscomplexobj(w):
        if np.max(np.abs(w.imag)) > 1e-12 * max(1.0, np.max(np.abs(w))):
            raise ValueError("weight must be real")
        w = w.real
    if np.min(w) < 0:
        raise ValueError("weight must be nonnegative")
    f = _field(f)
    return float(np.sqrt(2.0 / f.size * np.sum(np.abs(f) ** 2 * w)))
