"""Exact and numerical tools for real symplectic blow-ups and real ball packings of CP^2."""

__version__ = "0.1.0"
