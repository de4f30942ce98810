"""Exact verification engine for Hecke eigenvalues of theta-product Siegel cuspforms."""

__version__ = "0.1.0"
