"""Domain model: entities, clusters, occurrences, and identity rules.

Every name variant of one person resolves to a single integer entity id;
all downstream counting (clusters, co-occurrences, associates) happens on
ids, never on surface strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Iterable, Mapping

EntityId = int

# Cluster identifiers are opaque; files carry strings, synthetic corpora
# may use ints. They are only compared for equality and sorted for
# deterministic output.
ClusterId = str | int


class EntityKind(str, Enum):
    PERSON = "person"
    ORGANIZATION = "organization"


_WS_RUN = re.compile(r"\s+")


def normalize_surface(surface: str) -> str:
    """Collapse internal whitespace runs to single spaces and trim."""
    return _WS_RUN.sub(" ", surface).strip()


def resolve_variant(surface: str, variant_map: Mapping[str, EntityId]) -> EntityId | None:
    """Map a surface form to its entity id, or None when unmapped.

    Comparison is exact after whitespace normalization; no case folding
    (names are case-bearing). Fuzzy variant discovery happens upstream,
    this only applies a supplied map.
    """
    return variant_map.get(normalize_surface(surface))


@dataclass(frozen=True)
class Entity:
    """A canonical person or organization with its variant surface forms."""

    id: EntityId
    canonical_name: str
    variants: frozenset[str]
    kind: EntityKind = EntityKind.PERSON

    def __post_init__(self) -> None:
        if not self.variants:
            raise ValueError(f"entity {self.id} has no variants")
        if self.canonical_name not in self.variants:
            raise ValueError(
                f"canonical name {self.canonical_name!r} missing from variants of entity {self.id}"
            )


@dataclass(frozen=True)
class Cluster:
    """A group of related news articles treated as one story."""

    id: ClusterId
    language: str
    date: date
    article_count: int = 1
    medoid_url: str | None = None

    def __post_init__(self) -> None:
        if self.article_count < 1:
            raise ValueError(f"cluster {self.id}: article_count must be >= 1")


@dataclass(frozen=True)
class Occurrence:
    """An entity mentioned in a cluster. At most one per (entity, cluster)."""

    entity: EntityId
    cluster: ClusterId


@dataclass(frozen=True)
class TitleAttribution:
    """A trigger phrase counted in the context of an entity's mentions."""

    entity: EntityId
    phrase: str
    language: str
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("title attribution count must be >= 1")


class VariantConflictError(ValueError):
    """A variant string would map to two different entity ids."""


class UnknownEntityError(KeyError):
    """An entity id is not present in the store."""


class EntityRegistry:
    """Assigns stable entity ids and resolves variant surface forms.

    Ids are handed out monotonically at first insertion, so rebuilding a
    registry from the same input stream reproduces the same ids.
    """

    def __init__(self) -> None:
        self._by_id: dict[EntityId, Entity] = {}
        self._variant_map: dict[str, EntityId] = {}
        self._next_id: EntityId = 1

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, entity_id: EntityId) -> bool:
        return entity_id in self._by_id

    @property
    def variant_map(self) -> Mapping[str, EntityId]:
        return self._variant_map

    def add(
        self,
        canonical_name: str,
        variants: Iterable[str] = (),
        kind: EntityKind = EntityKind.PERSON,
        entity_id: EntityId | None = None,
    ) -> Entity:
        """Register an entity, normalizing all its surface forms.

        Raises VariantConflictError if any surface form is already mapped
        to a different id, and ValueError on a duplicate explicit id.
        """
        canonical = normalize_surface(canonical_name)
        forms = {canonical} | {normalize_surface(v) for v in variants}
        forms.discard("")
        if not canonical:
            raise ValueError("canonical name is empty")

        if entity_id is None:
            entity_id = self._next_id
        elif entity_id in self._by_id:
            raise ValueError(f"entity id {entity_id} already registered")

        for form in forms:
            owner = self._variant_map.get(form)
            if owner is not None and owner != entity_id:
                raise VariantConflictError(
                    f"variant {form!r} already maps to entity {owner}"
                )

        entity = Entity(entity_id, canonical, frozenset(forms), kind)
        self._by_id[entity_id] = entity
        for form in forms:
            self._variant_map[form] = entity_id
        self._next_id = max(self._next_id, entity_id + 1)
        return entity

    def get(self, entity_id: EntityId) -> Entity:
        try:
            return self._by_id[entity_id]
        except KeyError:
            raise UnknownEntityError(entity_id) from None

    def resolve(self, surface: str) -> EntityId | None:
        return resolve_variant(surface, self._variant_map)

    def kind(self, entity_id: EntityId) -> EntityKind:
        return self.get(entity_id).kind

    def entities(self) -> list[Entity]:
        return [self._by_id[i] for i in sorted(self._by_id)]

    def search(self, query: str) -> list[Entity]:
        """Case-insensitive substring search over all surface forms."""
        needle = normalize_surface(query).lower()
        if not needle:
            return []
        hits = [
            entity
            for entity in self.entities()
            if any(needle in form.lower() for form in entity.variants)
        ]
        return hits
