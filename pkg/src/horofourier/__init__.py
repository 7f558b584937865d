"""Numerical harmonic analysis on real hyperbolic spaces H2 and H3.

The package provides the horospherical Fourier transform and its inverse,
growth seminorms on a complexified frequency strip, invariant differential
operators acting as polynomials in the Laplacian, a division-based spectral
solver, and a one-dimensional Euclidean baseline for cross-checking.
"""

from ._accel import HAS_NUMBA, USE_JIT
from .config import ConfigError, RunConfig
from .euclidean import (EuclideanTestFunction, constcoeff_correspondence,
                        euclid_exponential_type, euclid_forward,
                        euclid_inverse, euclid_pw_seminorm,
                        euclid_roundtrip_error, mode_factorization_check)
from .functions import (TestFunction, dressed_bump, make_family,
                        offcenter_bump, radial_bump)
from .geometry import (H2, H3, BoundaryPoint, ModelParams, Point, PolarGrid,
                       distance, horocycle_bracket, make_polar_grid,
                       model_from_name)
from .operators import (InvariantOperator, SolveResult, SymbolVanishes,
                        apply_physical, apply_spectral, diagram_defect,
                        fd_laplacian, solve, support_radius)
from .paley_wiener import (PWReport, SeminormResult, StripGrid,
                           build_pw_report, continuity_constant,
                           exponential_type, seminorm, weyl_defect)
from .transform import (CalibrationError, ModeDecomposition,
                        PlancherelDensity, SpectralFunction,
                        boundary_mode_decompose, c_density,
                        calibrate_inversion, forward_transform,
                        helgason_forward, helgason_inverse,
                        spherical_function, uniform_lambda_grid)

__version__ = "0.1.0"

__all__ = [
    "HAS_NUMBA", "USE_JIT", "ConfigError", "RunConfig",
    "EuclideanTestFunction", "constcoeff_correspondence",
    "euclid_exponential_type", "euclid_forward", "euclid_inverse",
    "euclid_pw_seminorm", "euclid_roundtrip_error",
    "mode_factorization_check", "TestFunction", "dressed_bump",
    "make_family", "offcenter_bump", "radial_bump", "H2", "H3",
    "BoundaryPoint", "ModelParams", "Point", "PolarGrid", "distance",
    "horocycle_bracket", "make_polar_grid", "model_from_name",
    "InvariantOperator", "SolveResult", "SymbolVanishes", "apply_physical",
    "apply_spectral", "diagram_defect", "fd_laplacian", "solve",
    "support_radius", "PWReport", "SeminormResult", "StripGrid",
    "build_pw_report", "continuity_constant", "exponential_type", "seminorm",
    "weyl_defect", "CalibrationError", "ModeDecomposition",
    "PlancherelDensity", "SpectralFunction", "boundary_mode_decompose",
    "c_density", "calibrate_inversion", "forward_transform",
    "helgason_forward", "helgason_inverse", "spherical_function",
    "uniform_lambda_grid",
]
