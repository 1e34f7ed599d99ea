"""Invariants of genus-2 curves in characteristic 2, exactly."""

__version__ = "0.1.0"
