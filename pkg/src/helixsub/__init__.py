"""Numerical geometry of immersed patches, helix directions and curves on them."""

__version__ = "0.1.0"

from .catalog import catalog_get, catalog_names, parse_curve, parse_immersion
from .curves import AmbientCurve, ParamCurve, frenet, reparametrize_unit_speed, slant_helix_test
from .flows import integrate_curvature_line, integrate_geodesic, line_of_curvature_test
from .helix import decompose_direction, estimate_helix_space, grid_samples, is_helix_direction
from .manifold import ImmersedPatch, point_frame, shape_operator
from .numerics import DEFAULT_TOLERANCES, ToleranceProfile
from .theorems import TheoremReport, Verdict

__all__ = [
    "AmbientCurve",
    "DEFAULT_TOLERANCES",
    "ImmersedPatch",
    "ParamCurve",
    "TheoremReport",
    "ToleranceProfile",
    "Verdict",
    "catalog_get",
    "catalog_names",
    "decompose_direction",
    "estimate_helix_space",
    "frenet",
    "grid_samples",
    "integrate_curvature_line",
    "integrate_geodesic",
    "is_helix_direction",
    "line_of_curvature_test",
    "parse_curve",
    "parse_immersion",
    "point_frame",
    "reparametrize_unit_speed",
    "shape_operator",
    "slant_helix_test",
]
