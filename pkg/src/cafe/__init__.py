"""Covering arrays avoiding forbidden edges: construction, enumeration, verification."""

__version__ = "0.1.0"
