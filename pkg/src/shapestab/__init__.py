"""Stability of balls for shape functionals, computed spectrally and
cross-checked by independent PDE solves on perturbed disks.

The library is organized bottom-up:

- ``special_functions``: Bessel J, first zeros, and the ratio sequences
  entering the eigenvalue Hessian spectrum.
- ``ball_reference``: exact quantities on balls in any dimension d >= 2.
- ``hessian_spectra``: diagonal (per spherical-harmonic mode) spectra of the
  shape Hessians of volume, perimeter, Dirichlet energy and the first
  Dirichlet eigenvalue at the unit ball, plus Lagrangian and penalized forms.
- ``stability``: per-mode critical coefficients, their suprema, coercivity
  constants and minimal penalty weights.
- ``perturbed_disk``: exact geometry of radial-graph perturbations of the
  unit disk (d = 2).
- ``pde_oracle``: independent solvers (harmonic collocation for the Dirichlet
  energy, method of particular solutions for the eigenvalue, exact radial
  annulus solutions).
- ``verification``: finite-difference adjudication of every analytic
  coefficient against the PDE oracle.
- ``counterexample``: the annulus family showing failure of L^1-local
  minimality for perimeter plus a negative multiple of the energy.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DegenerateCoefficientError,
    IllConditionedError,
    InconclusiveTailError,
    InvalidDomainError,
    InvariantViolationError,
    SpuriousModeError,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DegenerateCoefficientError",
    "IllConditionedError",
    "InconclusiveTailError",
    "InvalidDomainError",
    "InvariantViolationError",
    "SpuriousModeError",
]
