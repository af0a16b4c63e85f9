"""Feasibility budgets for a laser power-beaming companion spacecraft."""

__version__ = "0.1.0"
