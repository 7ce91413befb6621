"""Finite spans, bispans and Tambara functors over finite groups and groupoids."""

__version__ = "0.1.0"
