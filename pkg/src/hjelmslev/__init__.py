"""Maximal arcs in projective Hjelmslev geometries over small chain rings."""

__version__ = "0.1.0"
