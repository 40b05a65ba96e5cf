"""Exact K-stability checks for rank-two symmetric varieties of type AIII(2, m)."""

__version__ = "0.1.0"
