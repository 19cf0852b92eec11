"""Multiway DoF - degrees-of-freedom analysis for the MIMO multi-way relay channel."""

__version__ = "0.1.0"
