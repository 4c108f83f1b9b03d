"""Toolkit for exploring large multilingual document collections."""

__version__ = "0.1.0"
