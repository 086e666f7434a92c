"""Finite cocycle bicrossed products of matched pairs of groups."""

__version__ = "0.1.0"
