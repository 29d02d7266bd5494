from __future__ import annotations

from datetime import date

import pytest

from namegraph.model import EntityKind, EntityRegistry
from namegraph.store import OccurrenceIndex, Snapshot


@pytest.fixture
def tiny_index() -> OccurrenceIndex:
    # e1 shares two clusters with e2, one with e3.
    return OccurrenceIndex.build(
        [(1, "c1"), (2, "c1"), (3, "c1"), (1, "c2"), (2, "c2")]
    )


@pytest.fixture
def tiny_snapshot() -> Snapshot:
    registry = EntityRegistry()
    registry.add("Alice Aronson", ["A. Aronson"], entity_id=1)
    registry.add("Bob Brandt", entity_id=2)
    registry.add("Carol Chen", entity_id=3)
    registry.add("World Bank", kind=EntityKind.ORGANIZATION, entity_id=4)
    index = OccurrenceIndex.build(
        [(1, "c1"), (2, "c1"), (3, "c1"), (1, "c2"), (2, "c2"), (4, "c2")],
        clusters=None,
    )
    titles = {}
    return Snapshot(registry=registry, index=index, titles=titles)


def make_dated_index():
    """Two days of clusters with known memberships, for VIP tests."""
    from namegraph.model import Cluster

    clusters = {
        "d1a": Cluster("d1a", "en", date(2005, 11, 12)),
        "d1b": Cluster("d1b", "en", date(2005, 11, 12)),
        "d2a": Cluster("d2a", "en", date(2005, 11, 13)),
    }
    pairs = [(1, "d1a"), (2, "d1a"), (1, "d1b"), (3, "d2a")]
    return OccurrenceIndex.build(pairs, clusters)
