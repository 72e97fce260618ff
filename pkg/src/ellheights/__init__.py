"""Exact local and canonical heights of rational points on elliptic curves
over Q.

Non-archimedean local heights are computed intersection-theoretically on the
minimal regular model (exact rationals times log p); the archimedean height
comes from the classical q-series.  Independent oracles (a doubling-limit
estimate of the canonical height and a residual decomposition) validate every
value.
"""

from .arith import InputError
from .curves import (CurvePoint, ModelMap, SingularCurveError,
                     WeierstrassCurve, apply_transform, format_rational,
                     naive_x_height, parse_rational)
from .fibers import (IntersectionValue, SpecialFiberGraph, VerticalQDivisor,
                     fiber_for_type, phi_pairing, section_intersection,
                     solve_phi)
from .tate import (ComponentGroup, KodairaType, LocalModelData,
                   component_index, is_in_E0, local_data, minimal_model_at)

__all__ = [
    "InputError", "SingularCurveError",
    "WeierstrassCurve", "CurvePoint", "ModelMap", "apply_transform",
    "parse_rational", "format_rational", "naive_x_height",
    "SpecialFiberGraph", "VerticalQDivisor", "IntersectionValue",
    "fiber_for_type", "solve_phi", "phi_pairing", "section_intersection",
    "KodairaType", "ComponentGroup", "LocalModelData",
    "local_data", "minimal_model_at", "is_in_E0", "component_index",
]
