"""Focal loci and classification of plane congruences in P^4, in exact arithmetic."""

from .chart import PlaneChart, Sampling, parse_chart, format_chart, validate_chart
from .classifier import ClassLabel, ClassReport, certificate_check, classify
from .exact import BinaryForm, Jet2
from .generators import GenSpec, generate, transform_chart
from .poly import Poly

__all__ = [
    "BinaryForm",
    "ClassLabel",
    "ClassReport",
    "GenSpec",
    "Jet2",
    "PlaneChart",
    "Poly",
    "Sampling",
    "certificate_check",
    "classify",
    "format_chart",
    "generate",
    "parse_chart",
    "transform_chart",
    "validate_chart",
]
