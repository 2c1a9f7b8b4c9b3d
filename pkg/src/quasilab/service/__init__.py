"""HTTP service wrapping the core checkers."""

from .app import app, create_app

__all__ = ["app", "create_app"]
