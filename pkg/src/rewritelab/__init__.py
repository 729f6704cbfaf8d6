"""Simple typing as abstract reduction, with rewriting analysis tools."""

__version__ = "0.1.0"
