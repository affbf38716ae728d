"""Exact toolkit for regular polynomial endomorphisms of the projective plane."""

__version__ = "0.1.0"
