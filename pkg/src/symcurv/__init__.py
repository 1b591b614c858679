"""Exact curvature computations for symplectic connections."""

__version__ = "0.1.0"
