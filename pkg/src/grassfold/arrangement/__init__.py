"""Linear configurations, derived configurations, posets and central arrangements."""

from .central import (
    CentralArrangement,
    FiberTypeCertificate,
    Refutation,
    expand_factors,
    factor_poincare,
    flats,
    is_fiber_type,
    poincare_polynomial,
    verify_fiber_certificate,
    whitney_poincare,
)
from .linear import (
    LinearConfiguration,
    add_and_complete,
    base_derived,
    complete,
    derivation_step_for,
    extend_derived,
    spanned_hyperplanes,
)
from .poset import IntersectionPoset, intersection_poset
from .script import (
    Derivation,
    Step,
    derive_script,
    evaluate_script,
    fiber_type_completion,
    script_from_json,
    script_to_json,
)

__all__ = [
    "CentralArrangement",
    "Derivation",
    "FiberTypeCertificate",
    "IntersectionPoset",
    "LinearConfiguration",
    "Refutation",
    "Step",
    "add_and_complete",
    "base_derived",
    "complete",
    "derivation_step_for",
    "derive_script",
    "evaluate_script",
    "expand_factors",
    "extend_derived",
    "factor_poincare",
    "fiber_type_completion",
    "flats",
    "intersection_poset",
    "is_fiber_type",
    "poincare_polynomial",
    "script_from_json",
    "script_to_json",
    "spanned_hyperplanes",
    "verify_fiber_certificate",
    "whitney_poincare",
]
