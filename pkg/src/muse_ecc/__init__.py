"""Arithmetic error-correcting codes built from multiply-by-constant encoding."""

__version__ = "0.1.0"
