"""Exact 2-descent and Kummer surface toolkit over Q."""

__version__ = "0.1.0"
