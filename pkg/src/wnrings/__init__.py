"""Exact valuation theory on finite data: multivaluation rings, W_n weights,
value-vector lattices, cube ranks and bounded local sentences."""

__version__ = "0.1.0"
