"""Numerical checks of geometric P=W for a rank-3 Hitchin system on the 3-punctured sphere."""

__version__ = "0.1.0"

from .betti import EigenvalueData, divisor_cubic, lawton_residual, sample_surface_point, singular_points
from .monodromy import UIntegrals, build_monodromy, trace_coords_closed_form, trace_coords_matrix
from .nerve import holonomy_phase_check, pw_verify, simpson_map, winding_number
from .numerics.scaled import ScaledComplex, ScaledMatrix
from .spectral import PolarParam, compute_periods, x_coordinate
from .stokes import dominance_empirical, dominance_expected, sector_of, stokes_ray_limits
from .transport import dilation_spectrum, model_transport, wkb_convergence_check

__all__ = [
    "EigenvalueData", "PolarParam", "ScaledComplex", "ScaledMatrix", "UIntegrals",
    "build_monodromy", "compute_periods", "dilation_spectrum", "divisor_cubic",
    "dominance_empirical", "dominance_expected", "holonomy_phase_check", "lawton_residual",
    "model_transport", "pw_verify", "sample_surface_point", "sector_of", "simpson_map",
    "singular_points", "stokes_ray_limits", "trace_coords_closed_form", "trace_coords_matrix",
    "winding_number", "wkb_convergence_check", "x_coordinate",
]
