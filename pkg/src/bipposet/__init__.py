"""Verification tools for 1-skeleton posets of Bruhat interval polytopes."""

__version__ = "0.1.0"
