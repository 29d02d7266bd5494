"""Read-only HTTP API over an immutable snapshot."""

from .app import create_app
from .state import SnapshotHolder

__all__ = ["create_app", "SnapshotHolder"]
