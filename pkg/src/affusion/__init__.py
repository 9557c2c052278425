"""Fusion rings of affine Kac-Moody algebras and their symmetries."""

__version__ = "1.0.0"
