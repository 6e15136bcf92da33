"""Reputation dynamics and strategy selection in the dictator game."""

__version__ = "0.1.0"
