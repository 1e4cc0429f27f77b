"""Exact-arithmetic toolkit for hat-family supertiles."""

__version__ = "0.1.0"
