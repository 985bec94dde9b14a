"""Exact structural analysis of topological quivers."""

__version__ = "0.1.0"
