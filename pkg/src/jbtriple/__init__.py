"""Numerical toolkit for finite-dimensional real JB*-triples."""

__version__ = "0.1.0"
