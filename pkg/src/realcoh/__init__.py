"""Exact computation of real Galois cohomology of linear algebraic groups."""

__version__ = "0.1.0"
