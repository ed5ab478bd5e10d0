"""Hardness reductions from cubic monotone one-in-three 3SAT to τ-synthesis."""

from .builder import Gadget, GadgetBuilder
from .families import (
    FAMILIES,
    Family,
    GadgetOutput,
    accepted_types,
    build_gadget,
    orient,
)
from .instances import (
    ORACLE_LIMIT,
    OneInThreeInstance,
    brute_force_model,
    is_model,
    validate_instance,
)
from .verify import (
    GadgetVerdict,
    GadgetVerification,
    model_from_region,
    model_to_region,
    verify_gadget,
)

__all__ = [
    "FAMILIES",
    "ORACLE_LIMIT",
    "Family",
    "Gadget",
    "GadgetBuilder",
    "GadgetOutput",
    "GadgetVerdict",
    "GadgetVerification",
    "OneInThreeInstance",
    "accepted_types",
    "brute_force_model",
    "build_gadget",
    "is_model",
    "model_from_region",
    "model_to_region",
    "orient",
    "validate_instance",
    "verify_gadget",
]
