"""Finite structure–semantics engine."""

__version__ = "0.1.0"
