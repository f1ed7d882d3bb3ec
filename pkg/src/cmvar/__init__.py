"""Distance geometry and determinantal varieties of point configurations."""

from .distances import (
    CayleyVector,
    Configuration,
    cayley_from_configuration,
    cayley_from_gram,
    embed,
    gram_from_cayley,
    rank_det_check,
    realizability,
)
from .kernels import BACKEND
from .varieties import Family, VarietyId, degree, degree_cm2, dimension, invariants

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CayleyVector",
    "Configuration",
    "Family",
    "VarietyId",
    "cayley_from_configuration",
    "cayley_from_gram",
    "degree",
    "degree_cm2",
    "dimension",
    "embed",
    "gram_from_cayley",
    "invariants",
    "rank_det_check",
    "realizability",
]
