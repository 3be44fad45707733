"""Compile embedded planar graphs into integer ray scenes for the complement of an even subdivision."""

__version__ = "0.1.0"
