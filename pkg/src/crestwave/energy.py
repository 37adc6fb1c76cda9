"""Low-regularity energy of the interface and its characterization norms.

Material time derivatives are eliminated with the commutator identities

    D_t D f   = D f_t - (D Z_t)(D f)
    D_t D^2 f = D^2 f_t - 2 (D Z_t) D^2 f - (D^2 Z_t) D f

applied to ``f = Vbar``, so the energy is a function of one state.
"""

from dataclasses import dataclass, asdict, fields

import numpy as np

from . import spectral as sp

__all__ = [
    "EnergyReport",
    "CharacterizationReport",
    "ENERGY_COLUMNS",
    "energy",
    "characterization",
    "h_half_holomorphic",
    "growth_bound",
]

ENERGY_COLUMNS = ("t", "ea_1", "ea_23", "ea_4", "eb_1", "eb_2", "eb_3",
                  "anchor", "total", "minA1", "holo_drift")


@dataclass(frozen=True)
class EnergyReport:
    ea_1: float
    ea_23: float
    ea_4: float
    eb_1: float
    eb_2: float
    eb_3: float
    anchor: float
    total: float
    t: float = 0.0
    minA1: float = float("nan")
    holo_drift: float = 0.0

    @property
    def ea(self):
        return self.ea_1 + self.ea_23 + self.ea_4

    @property
    def eb(self):
        return self.eb_1 + self.eb_2 + self.eb_3

    def row(self):
        """Values in CSV column order."""
        d = asdict(self)
        return [d[c] for c in ENERGY_COLUMNS]

    def replace(self, **kw):
        d = asdict(self)
        d.update(kw)
        return EnergyReport(**d)


@dataclass(frozen=True)
class CharacterizationReport:
    dZt_bar_L2: float
    D2_Zt_bar_L2: float
    d_Zp_inv_L2: float
    D2_Zp_inv_L2: float
    weighted_D2_Zt_bar_Hhalf: float
    D_Zt_bar_Hhalf: float
    Zp_inv_sup: float

    def values(self):
        return np.array([getattr(self, f.name) for f in fields(self)])


def energy(s, d, alpha0=0.0):
    """Componentwise energy of state ``s`` with derived fields ``d``.

    ``alpha0`` must be a grid point; the anchor term is ``|Ztt_bar(alpha0) - i|``.
    """
    j = s.grid.index_of(alpha0)
    zp_inv = d.Zp_inv
    D = lambda f: sp.weighted_derivative(f, zp_inv)
    inv_a1 = 1.0 / d.A1

    DV, DZt = D(s.Vbar), D(s.Zt)
    D2V, D2Zt = D(DV), D(DZt)
    DZtt_bar = D(d.Ztt_bar)
    Dt_D2V = D(DZtt_bar) - 2 * sp.product(DZt, D2V) - sp.product(D2Zt, DV)
    Dt_DV = DZtt_bar - sp.product(DZt, DV)

    ea_1 = sp.weighted_l2_norm(Dt_D2V, inv_a1) ** 2
    ea_23 = sp.h_half_norm_sq(sp.product(zp_inv, D2V))
    ea_4 = sp.weighted_l2_norm(D2V, inv_a1) ** 2
    eb_1 = sp.weighted_l2_norm(Dt_DV, np.abs(d.Zp) ** 2 * inv_a1) ** 2
    eb_2 = sp.h_half_norm_sq(DV)
    eb_3 = sp.l2_norm(sp.spectral_derivative(s.Vbar)) ** 2
    anchor = float(abs(d.Ztt_bar[j] - 1j))
    total = ea_1 + ea_23 + ea_4 + eb_1 + eb_2 + eb_3 + anchor
    return EnergyReport(ea_1, ea_23, ea_4, eb_1, eb_2, eb_3, anchor, total,
                        t=s.t, minA1=float(np.min(d.A1)))


def h_half_holomorphic(f):
    """``Re int i f' conj(f)``; equals the half-derivative seminorm for holomorphic ``f``."""
    df = sp.spectral_derivative(f)
    return float(np.real(1j * 2.0 / df.size * np.sum(df * np.conj(f))))


def characterization(s, d, dealias=True):
    """The seven norms that together are comparable to the energy.

    ``dealias=False`` forms the weighted derivatives sample by sample, as
    suits crest data whose weight is not resolved.
    """
    zp_inv = d.Zp_inv
    D = lambda f: sp.weighted_derivative(f, zp_inv, dealias)
    mul = sp.product if dealias else np.multiply
    DV = D(s.Vbar)
    D2V = D(DV)
    return CharacterizationReport(
        dZt_bar_L2=sp.l2_norm(sp.spectral_derivative(s.Vbar)),
        D2_Zt_bar_L2=sp.l2_norm(D2V),
        d_Zp_inv_L2=sp.l2_norm(sp.spectral_derivative(zp_inv)),
        D2_Zp_inv_L2=sp.l2_norm(D(D(zp_inv))),
        weighted_D2_Zt_bar_Hhalf=float(np.sqrt(sp.h_half_norm_sq(mul(zp_inv, D2V)))),
        D_Zt_bar_Hhalf=float(np.sqrt(sp.h_half_norm_sq(DV))),
        Zp_inv_sup=sp.sup_norm(zp_inv),
    )


def growth_bound(t, E, p=2.0):
    """``sup |dE/dt| / (1 + E)^p`` along a sampled energy curve.

    ``dE/dt`` is taken by second-order finite differences on the samples.
    """
    t = np.asarray(t, dtype=float)
    E = np.asarray(E, dtype=float)
    if t.size < 3:
        raise ValueError("need at least three samples")
    dE = np.gradient(E, t, edge_order=2)
    return float(np.max(np.abs(dE) / (1.0 + E) ** p))
