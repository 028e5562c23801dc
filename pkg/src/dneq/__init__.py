"""Exact construction and verification of determinantal (DN) differential
equations and the modular D3 families."""

__version__ = "0.1.0"
