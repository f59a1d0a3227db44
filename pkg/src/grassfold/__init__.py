"""Exact projective configurations, derived arrangements and template strata."""

__version__ = "0.1.0"
