"""Computational classification of maximum three-distance sets in R^3."""

__version__ = "0.1.0"
