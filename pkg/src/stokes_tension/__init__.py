"""Boundary-integral tension solver for inextensible interfaces in 2D Stokes flow."""

from ._hot import BACKEND
from .curve import (
    ClosedCurve,
    PerturbationSpec,
    arclength_map,
    build_curve,
    circle,
    ellipse,
    fourier_curve,
    perturbed_circle,
    star_norm,
)
from .errors import (
    ConfigError,
    IllConditioned,
    NotSingular,
    Orientation,
    SelfIntersecting,
    SingularOperator,
    SingularPoint,
    TooCloseToInterface,
    ZeroSpeed,
)
from .spectra import SpectrumReport, eigenvalue_sweep, lambda2, nullspace_vector, spectrum
from .spectral import PeriodicGrid
from .tension import ForceDensity, TensionSolution, apply_L, apply_Q, assemble_L, solve_tension

__version__ = "0.1.0"
