"""Canonical equivariant Levi reductions of vector bundles on the projective line."""

__version__ = "0.1.0"
