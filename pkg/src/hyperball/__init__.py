"""Hyperbolic neural-network building blocks on the Poincaré ball."""

__version__ = "0.1.0"
