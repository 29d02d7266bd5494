"""Snapshot holding and atomic swapping for the query service.

Requests read a snapshot reference once and serve entirely from it, so
no response ever mixes two snapshots. Ingestion produces a new snapshot
file; the holder swaps it in on reload (SIGHUP when running under the
CLI) or restart.
"""

from __future__ import annotations

from pathlib import Path

from ..store import Snapshot


class SnapshotHolder:
    def __init__(self, snapshot: Snapshot, path: str | Path | None = None) -> None:
        self._snapshot = snapshot
        self._path = Path(path) if path is not None else None

    @classmethod
    def from_file(cls, path: str | Path) -> SnapshotHolder:
        return cls(Snapshot.load(path), path)

    def get(self) -> Snapshot:
        return self._snapshot

    def swap(self, snapshot: Snapshot) -> None:
        # Reference assignment is atomic; readers keep whatever they grabbed.
        self._snapshot = snapshot

    def reload(self) -> None:
        if self._path is None:
            raise ValueError("holder was not created from a file")
        self.swap(Snapshot.load(self._path))
