"""Koszul resolutions over representation rings and the K-theory they compute."""

__version__ = "0.1.0"
