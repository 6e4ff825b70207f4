"""
Harmonic analysis over odd prime fields: characters and Gauss sums, Fourier
transforms on F_q^d, spheres and homogeneous varieties, the S-operator and
restriction estimates.
"""
from ffharmonic.field import case_tag, gauss_sum, make_field
from ffharmonic.grid import fourier_transform, inverse_fourier_transform, lp_norm
from ffharmonic.logging_config import configure_logging, get_logger
from ffharmonic.models import (
    AffineSubspace,
    CaseKind,
    CaseTag,
    GridFunction,
    HomogeneousFunction,
    Measure,
    PrimeField,
    SearchClass,
    VarietyKind,
    VarietySpec,
)

__all__ = [
    "AffineSubspace",
    "CaseKind",
    "CaseTag",
    "GridFunction",
    "HomogeneousFunction",
    "Measure",
    "PrimeField",
    "SearchClass",
    "VarietyKind",
    "VarietySpec",
    "case_tag",
    "configure_logging",
    "fourier_transform",
    "gauss_sum",
    "get_logger",
    "inverse_fourier_transform",
    "lp_norm",
    "make_field",
]
