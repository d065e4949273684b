"""Colored Alexander polynomials, q-Weyl annihilators, colored knot Floer
complexes and homological holonomicity certificates, in exact arithmetic."""

__version__ = "0.1.0"
