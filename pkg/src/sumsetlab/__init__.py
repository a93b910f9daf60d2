"""Exact-arithmetic laboratory for few-products / many-sums machinery."""

__version__ = "0.1.0"
