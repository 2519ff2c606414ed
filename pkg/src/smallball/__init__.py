"""Exact verification of distribution-free small-ball inequalities."""

__version__ = "0.1.0"
