"""Periodic orbit at infinity analysis for planar piecewise linear systems."""

__version__ = "0.1.0"
