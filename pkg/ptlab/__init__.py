"""Biorthogonal (PT-symmetric) quantum mechanics toolkit."""

__version__ = "0.3.0"
