"""Exact computations for Lie triple systems, O-operators and their cohomology."""

__version__ = "0.1.0"
