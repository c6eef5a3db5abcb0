"""Numerical q-series engine and identity-verification harness."""

__version__ = "0.1.0"
