"""Exact parallel multi-objective integer programming."""

__version__ = "0.1.0"
