"""Generic Grassmannian points, strata, constructible sets and the U-search."""

from .point import (
    GrassPoint,
    dual_face_map,
    face_map,
    is_generic,
    normal_form,
    point_config,
    random_point,
    vandermonde_section,
    y_coordinates,
)
from .search import SearchBudget, certificate_digest, search_u, verify_certificate
from .strata import (
    Closure,
    ConstructibleSet,
    closure_member,
    in_constructible_open,
    incidence_conditions,
    stratum_member,
)

__all__ = [
    "SearchBudget",
    "certificate_digest",
    "search_u",
    "verify_certificate",
    "Closure",
    "ConstructibleSet",
    "GrassPoint",
    "closure_member",
    "dual_face_map",
    "face_map",
    "in_constructible_open",
    "incidence_conditions",
    "is_generic",
    "normal_form",
    "point_config",
    "random_point",
    "stratum_member",
    "vandermonde_section",
    "y_coordinates",
]
