"""Pseudospectral water waves between vertical walls in conformal coordinates.

The interface is described on the flat period-2 interval by the map
perturbation ``W`` and the conjugate velocity ``Vbar``, both boundary values
of holomorphic functions. The package provides the spectral toolkit, the
derived fields of a state, the low-regularity energy, an RK4 integrator,
initial data including angled crests, and executable checks of the
underlying identities and inequalities.
"""

from .spectral import PeriodicGrid, hilbert, product, project, spectral_derivative
from .state import InterfaceState, Tolerances, GaugeWarning, derive, enforce_holomorphic
from .energy import EnergyReport, CharacterizationReport, energy, characterization, growth_bound
from .evolution import RunConfig, RunResult, StepError, run, step
from .initdata import ICDescriptor, make_ic, random_state
from .verify import (VerifyReport, check_identities, check_commutator_identities,
                     check_inequalities, check_taylor, crest_angle_scan)

__version__ = "0.1.0"

__all__ = [
    "PeriodicGrid", "hilbert", "product", "project", "spectral_derivative",
    "InterfaceState", "Tolerances", "GaugeWarning", "derive", "enforce_holomorphic",
    "EnergyReport", "CharacterizationReport", "energy", "characterization", "growth_bound",
    "RunConfig", "RunResult", "StepError", "run", "step",
    "ICDescriptor", "make_ic", "random_state",
    "VerifyReport", "check_identities", "check_commutator_identities",
    "check_inequalities", "check_taylor", "crest_angle_scan",
]
