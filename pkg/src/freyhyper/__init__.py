"""Frey hyperelliptic curves attached to x^p + y^p = z^5 over Q(sqrt 5)."""

__version__ = "0.1.0"
