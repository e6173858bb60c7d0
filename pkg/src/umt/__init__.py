"""Finite-scale universe model toolkit: superstructures, ultraproducts, transfer maps and collapses."""

__version__ = "0.1.0"
