"""Enumeration and classification of mutually orthogonal latin squares of small order."""

__version__ = "0.1.0"
