"""Entropic Bell, contextuality and bilocality inequalities."""

__version__ = "1.0.0"
