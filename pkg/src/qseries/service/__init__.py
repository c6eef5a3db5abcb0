"""HTTP service exposing evaluation, verification and the catalogs."""

from .app import app, create_app

__all__ = ["app", "create_app"]
