"""Canonical labeling and automorphism groups of vertex-colored graphs."""

from ._backend import BACKENDS, DEFAULT_BACKEND
from .graph import ColoredGraph, parse_dimacs
from .search import CanonResult, canonical_form, orbits, refine

__all__ = [
    "BACKENDS",
    "DEFAULT_BACKEND",
    "CanonResult",
    "ColoredGraph",
    "canonical_form",
    "orbits",
    "parse_dimacs",
    "refine",
]
