"""Formal group laws and their generalized nilHecke algebras, computed exactly."""

from __future__ import annotations

from .coefring import CoeffElem, CoeffRing, Param
from .errors import (
    AxiomViolation,
    FGLNHError,
    GradingViolation,
    InputError,
    InternalInconsistency,
    NoDependency,
    NotDivisible,
    NotSymmetric,
)
from .fgl import FormalGroupLaw, fgl_catalog, fgl_from_spec, fgl_perturb, random_log_fgl
from .nilhecke import (
    Presentation,
    TwistedOperator,
    braid_obstruction,
    build_generators,
    deformation_lr,
    deformation_lr_reading_order,
    deformation_st,
    emit_presentation,
    first_order_delta,
    symmetric_simplification,
    verify_presentation,
)
from .series import DiffFraction, TruncSeries

__all__ = [
    "AxiomViolation",
    "CoeffElem",
    "CoeffRing",
    "DiffFraction",
    "FGLNHError",
    "FormalGroupLaw",
    "GradingViolation",
    "InputError",
    "InternalInconsistency",
    "NoDependency",
    "NotDivisible",
    "NotSymmetric",
    "Param",
    "Presentation",
    "TruncSeries",
    "TwistedOperator",
    "braid_obstruction",
    "build_generators",
    "deformation_lr",
    "deformation_lr_reading_order",
    "deformation_st",
    "emit_presentation",
    "fgl_catalog",
    "fgl_from_spec",
    "fgl_perturb",
    "first_order_delta",
    "random_log_fgl",
    "symmetric_simplification",
    "verify_presentation",
]

__version__ = "0.1.0"
