"""Exact construction and analysis of higher Airy structures from twisted W-algebra modules."""

__version__ = "0.1.0"
