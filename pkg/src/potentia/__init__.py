"""Exact computations for potential algebras ``B(M) = k<x, z>/(d_x w, f)``."""

__version__ = "0.1.0"
