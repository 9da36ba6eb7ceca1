"""anyonspec: spectra of self-adjoint two-anyon radial Hamiltonians.

The relative motion of two anyons with statistics parameter alpha in
(0, 1) reduces, in the even angular sectors, to radial operators on the
half line.  The s-wave operator admits a one-parameter family of
self-adjoint realizations labelled by a boundary parameter beta (with
the Friedrichs extension as the beta -> +infinity limit).  This package
builds the associated quadratic forms, the defect elements
``lambda^alpha K_alpha(lambda r)`` that encode the boundary coupling,
and Rayleigh-Ritz spectra in a singularity-adapted Laguerre basis, and
cross-checks the numerics against closed forms for the Gram identities
and the bound-state energy.

Units: hbar = 1 and reduced mass 1/2, so the free radial operator is
``-d^2/dr^2 - (1/r) d/dr + (2k + alpha)^2 / r^2`` on sector k and
energies carry dimension 1/length^2.
"""

from .specfun import Order, EvalResult, backend_name
from .defect import DefectFunction, c_alpha
from .potentials import AssumptionViolation, PotentialSpec, parse_potential
from .forms import (
    FRIEDRICHS,
    ExtensionParameter,
    FormDecomposition,
    NotInFormDomainError,
    SectorState,
)
from .basis import RadialBasis
from .spectral import SpectralResult, closed_form_ground_energy, solve_sector

__version__ = "0.1.0"

__all__ = [
    "Order",
    "EvalResult",
    "backend_name",
    "DefectFunction",
    "c_alpha",
    "AssumptionViolation",
    "PotentialSpec",
    "parse_potential",
    "FRIEDRICHS",
    "ExtensionParameter",
    "FormDecomposition",
    "NotInFormDomainError",
    "SectorState",
    "RadialBasis",
    "SpectralResult",
    "closed_form_ground_energy",
    "solve_sector",
    "__version__",
]
