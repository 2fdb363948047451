"""Exact and numeric verification of quaternionic analysis identities."""

__version__ = "0.1.0"
