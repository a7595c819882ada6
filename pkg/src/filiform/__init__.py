"""Exact symbolic engine for filiform Lie algebra deformations."""

__version__ = "0.1.0"
