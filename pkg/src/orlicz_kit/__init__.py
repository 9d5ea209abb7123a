"""Orlicz-space numerics."""

__version__ = "0.1.0"
