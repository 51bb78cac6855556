"""Moving-boundary tumour growth on the disk.

Steady radial equilibria, the stability spectrum of the linearized boundary
dynamics, and linear / fully nonlinear shape evolution with spectral field
solves on the perturbed domain.
"""

from .backend import BACKEND, USE_NUMBA
from .dynamics import (PhiResult, StepperSettings, Trajectory,
                       TrajectoryPoint, evolve_nonlinear, phi)
from .errors import (BracketError, DomainValidityError, SolverError,
                     TumorSpecError, ValidationError)
from .fields import (BoundaryGeometry, DiskField, GridSettings, center_value,
                     curvature, harmonic_residual, solve_nutrient,
                     solve_pressure)
from .linear import (GrowthFit, evolve_linear, fit_growth_rate,
                     linear_trajectory, linearized_mode_profile)
from .models import (NutrientModel, identity_model, parse_model_spec,
                     polynomial_model)
from .radial import (RadialProfile, SolverSettings, SteadyState,
                     appendix_series, boundary_ratio, solve_U, solve_u_n,
                     steady_radius)
from .shapes import ADMISSIBLE_SUP_NORM, ShapeState
from .spectrum import (DEFAULT_K_MAX, ModelParameters, SpectrumTable,
                       StabilityReport, build_table, classify_stability,
                       g_star, g_threshold, l_G_index, lambda_k, mu_k)

__version__ = "0.1.0"

__all__ = [
    "ADMISSIBLE_SUP_NORM", "BACKEND", "BoundaryGeometry", "BracketError",
    "DEFAULT_K_MAX", "DiskField", "DomainValidityError", "GridSettings",
    "GrowthFit", "ModelParameters", "NutrientModel", "PhiResult",
    "RadialProfile", "ShapeState", "SolverError", "SolverSettings",
    "SpectrumTable", "StabilityReport", "SteadyState", "StepperSettings",
    "Trajectory", "TrajectoryPoint", "TumorSpecError", "USE_NUMBA",
    "ValidationError", "appendix_series", "boundary_ratio", "build_table",
    "center_value", "classify_stability", "curvature", "evolve_linear",
    "evolve_nonlinear", "fit_growth_rate", "g_star", "g_threshold",
    "harmonic_residual", "identity_model", "l_G_index", "lambda_k",
    "linear_trajectory", "linearized_mode_profile", "mu_k",
    "parse_model_spec", "phi", "polynomial_model", "solve_U", "solve_nutrient",
    "solve_pressure", "solve_u_n", "steady_radius",
]
