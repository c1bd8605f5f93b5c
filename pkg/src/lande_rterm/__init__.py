"""Lande interval rule and a scalar-curvature term in the Schroedinger equation."""

__version__ = "0.1.0"
