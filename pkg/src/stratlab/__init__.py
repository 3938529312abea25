"""Exact-arithmetic checks of Whitney-type regularity along analytic arcs."""

__version__ = "0.1.0"
