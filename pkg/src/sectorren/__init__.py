"""Sector renormalization of rotation numbers and its numerical consequences."""
__version__ = "0.1.0"
