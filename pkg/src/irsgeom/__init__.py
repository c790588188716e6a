"""Exact computations for groups acting on hyperbolic spaces and their invariant random subgroups."""

__version__ = "0.1.0"
