"""Pointing-error simulation and analysis for airborne free-space optical links."""

__version__ = "0.1.0"
