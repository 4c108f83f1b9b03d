"""Historical store, reports, and the read-only HTTP API."""

from .store import Store

__all__ = ["Store"]
