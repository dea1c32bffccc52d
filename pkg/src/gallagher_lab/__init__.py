"""Weighted large-sieve (Gallagher-type) inequalities, Cesaro smoothing and
Selberg-type integrals, computed exactly where possible."""

__version__ = "0.1.0"
