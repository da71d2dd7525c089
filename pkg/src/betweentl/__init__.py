"""Temporal and two-variable logics with between predicates on finite words."""

__version__ = "0.1.0"
