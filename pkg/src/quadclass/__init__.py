"""Exact class-number tools for quadratic fields with 3-divisible class numbers."""

__version__ = "0.1.0"
