from .ode import ode_fundamental
from .paths import (BranchState, CircleArc, PathSpec, Segment, circle, continue_cube_root,
                    eta0, eta1, gamma0, gamma1, segment)
from .quadrature import adaptive_gk, integrate_endpoint_singular, integrate_path
from .scaled import ScaledComplex, ScaledMatrix

__all__ = [
    "BranchState", "CircleArc", "PathSpec", "ScaledComplex", "ScaledMatrix", "Segment",
    "adaptive_gk", "circle", "continue_cube_root", "eta0", "eta1", "gamma0", "gamma1",
    "integrate_endpoint_singular", "integrate_path", "ode_fundamental", "segment",
]
