"""Stable norms of slit tori and of surfaces glued from them."""

from .errors import SlitNormError, ValidationError
from .farey import continued_fraction, cutting_word, farey_parents, mediant
from .torus import HClass, NormCertificate, VerticalSlitTorus, classify_direction, is_visible, stable_norm

__all__ = [
    "HClass",
    "NormCertificate",
    "SlitNormError",
    "ValidationError",
    "VerticalSlitTorus",
    "classify_direction",
    "continued_fraction",
    "cutting_word",
    "farey_parents",
    "is_visible",
    "mediant",
    "stable_norm",
]
