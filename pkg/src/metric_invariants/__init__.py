"""Exact computation of metric differential invariant counts via jet prolongation."""

__version__ = "0.1.0"
