"""Decorated mapper graphs and cellular cosheaves of scalar fields."""

__version__ = "0.1.0"
