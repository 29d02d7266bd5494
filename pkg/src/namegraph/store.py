"""Ingestion, persistence, and the inverted occurrence index.

The index is an immutable snapshot: postings (entity -> clusters) and
cluster membership (cluster -> entities) are mutually consistent
inverses, and the per-entity cluster counts and associate counts that
feed the association weighting are materialized at build time. Daily
updates are full rebuilds; the service swaps whole snapshots.
"""

from __future__ import annotations

import pickle
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import date
from itertools import chain
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

from .model import (
    Cluster,
    ClusterId,
    EntityId,
    EntityKind,
    EntityRegistry,
    TitleAttribution,
    UnknownEntityError,
)


class IngestError(ValueError):
    """An input record cannot be ingested (bad reference or malformed line)."""


# Cap on per-chunk pair expansion while counting distinct associates.
_PAIR_CHUNK = 4_000_000


@dataclass(frozen=True)
class OccurrenceIndex:
    """Immutable inverted index over (entity, cluster) occurrences.

    postings[e] and cluster_members[c] are sorted, duplicate-free lists.
    cluster_freq[e] is the number of clusters mentioning e; associate_count[e]
    is the number of distinct entities sharing at least one cluster with e.
    """

    postings: dict[EntityId, list[ClusterId]]
    cluster_members: dict[ClusterId, list[EntityId]]
    cluster_freq: dict[EntityId, int]
    associate_count: dict[EntityId, int]
    clusters: dict[ClusterId, Cluster]
    clusters_by_date: dict[date, list[ClusterId]]
    snapshot_date: date | None

    @classmethod
    def build(
        cls,
        occurrences: Iterable[tuple[EntityId, ClusterId]],
        clusters: Mapping[ClusterId, Cluster] | None = None,
        snapshot_date: date | None = None,
    ) -> OccurrenceIndex:
        """Build an index from (entity, cluster) pairs.

        Duplicate pairs collapse silently. When a cluster mapping is given,
        pairs referencing undeclared clusters raise IngestError; without
        one, placeholder cluster metadata is synthesized (toy corpora).
        """
        by_entity: dict[EntityId, set[ClusterId]] = defaultdict(set)
        by_cluster: dict[ClusterId, set[EntityId]] = defaultdict(set)
        for entity, cluster in occurrences:
            if clusters is not None and cluster not in clusters:
                raise IngestError(f"occurrence references undeclared cluster {cluster!r}")
            by_entity[entity].add(cluster)
            by_cluster[cluster].add(entity)

        if clusters is None:
            cluster_meta = {
                c: Cluster(id=c, language="en", date=date(2000, 1, 1))
                for c in by_cluster
            }
        else:
            cluster_meta = dict(clusters)

        postings = {e: sorted(cs) for e, cs in by_entity.items()}
        members = {c: sorted(es) for c, es in by_cluster.items()}
        freq = {e: len(cs) for e, cs in postings.items()}
        associates = _associate_counts(members, sorted(postings))

        by_date: dict[date, list[ClusterId]] = defaultdict(list)
        for c in sorted(cluster_meta, key=repr):
            by_date[cluster_meta[c].date].append(c)

        if snapshot_date is None and cluster_meta:
            snapshot_date = max(meta.date for meta in cluster_meta.values())

        return cls(
            postings=postings,
            cluster_members=members,
            cluster_freq=freq,
            associate_count=associates,
            clusters=cluster_meta,
            clusters_by_date=dict(by_date),
            snapshot_date=snapshot_date,
        )

    def __contains__(self, entity: EntityId) -> bool:
        return entity in self.postings

    def entities(self) -> list[EntityId]:
        return sorted(self.postings)

    def co_cluster_count(self, e1: EntityId, e2: EntityId) -> int:
        """Number of clusters where both entities occur. Symmetric."""
        p1 = self._posting_set(e1)
        p2 = self._posting_set(e2)
        if len(p1) > len(p2):
            p1, p2 = p2, p1
        return sum(1 for c in p1 if c in p2)

    def _posting_set(self, entity: EntityId) -> set[ClusterId]:
        try:
            return set(self.postings[entity])
        except KeyError:
            raise UnknownEntityError(entity) from None

    def partner_counts(self, entity: EntityId) -> Counter:
        """Co-cluster counts for every entity sharing a cluster with `entity`.

        Cost is the total membership size of the entity's clusters, which
        keeps single-person queries fast even on large corpora.
        """
        if entity not in self.postings:
            raise UnknownEntityError(entity)
        counts = Counter(
            chain.from_iterable(self.cluster_members[c] for c in self.postings[entity])
        )
        del counts[entity]
        return counts

    def neighbors(self, entity: EntityId) -> list[tuple[EntityId, int]]:
        """Co-occurring entities, by co-cluster count descending then id."""
        counts = self.partner_counts(entity)
        return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def clusters_on(self, day: date) -> list[ClusterId]:
        return list(self.clusters_by_date.get(day, ()))


def _associate_counts(
    cluster_members: Mapping[ClusterId, list[EntityId]],
    entity_ids: list[EntityId],
) -> dict[EntityId, int]:
    """Distinct-partner counts per entity, computed by vectorized pair
    expansion over clusters. Chunked so peak memory stays bounded."""
    if not entity_ids:
        return {}
    eidx = {e: i for i, e in enumerate(entity_ids)}
    n = len(entity_ids)

    member_arrays = [
        np.fromiter((eidx[e] for e in members), dtype=np.int64, count=len(members))
        for members in cluster_members.values()
    ]

    unique_chunks: list[np.ndarray] = []
    batch: list[np.ndarray] = []
    budget = 0
    for arr in member_arrays:
        batch.append(arr)
        budget += len(arr) ** 2
        if budget >= _PAIR_CHUNK:
            unique_chunks.append(_distinct_pair_keys(batch, n))
            batch, budget = [], 0
    if batch:
        unique_chunks.append(_distinct_pair_keys(batch, n))

    keys = np.unique(np.concatenate(unique_chunks))
    # Every occurring entity produces its own (e, e) key; subtracting one
    # removes it, leaving the distinct-partner count.
    per_entity = np.bincount(keys // n, minlength=n) - 1
    return {e: int(per_entity[i]) for e, i in eidx.items()}


def _distinct_pair_keys(member_arrays: list[np.ndarray], n: int) -> np.ndarray:
    """All distinct (a, b) member pairs of the given clusters, keyed a*n+b."""
    ent = np.concatenate(member_arrays)
    sizes = np.fromiter((len(a) for a in member_arrays), dtype=np.int64)
    sq = sizes * sizes
    total = int(sq.sum())
    block_start = np.repeat(np.cumsum(sq) - sq, sq)
    within = np.arange(total, dtype=np.int64) - block_start
    occ_start = np.repeat(np.cumsum(sizes) - sizes, sq)
    s_rep = np.repeat(sizes, sq)
    a = ent[occ_start + within // s_rep]
    b = ent[occ_start + within % s_rep]
    return np.unique(a * n + b)


# ---------------------------------------------------------------------------
# File formats (all UTF-8, tab-separated, '#' comments and blank lines skipped)
#
#   entities:    entity_id  kind  canonical_name  [variant|variant|...]
#   clusters:    cluster_id  language  date(YYYY-MM-DD)  article_count  [medoid_url]
#   occurrences: cluster_id  language  date(YYYY-MM-DD)  entity_id_or_surface
#   titles:      entity_id  language  phrase  count
# ---------------------------------------------------------------------------


def _rows(path: Path) -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def _fail(path: Path, lineno: int, message: str) -> IngestError:
    return IngestError(f"{path}:{lineno}: {message}")


def read_entities(path: str | Path, registry: EntityRegistry) -> None:
    """Load entity declarations into the registry."""
    path = Path(path)
    for lineno, cols in _rows(path):
        if len(cols) < 3:
            raise _fail(path, lineno, "expected entity_id, kind, canonical_name")
        try:
            entity_id = int(cols[0])
        except ValueError:
            raise _fail(path, lineno, f"bad entity id {cols[0]!r}") from None
        try:
            kind = EntityKind(cols[1])
        except ValueError:
            raise _fail(path, lineno, f"bad kind {cols[1]!r}") from None
        variants = cols[3].split("|") if len(cols) > 3 and cols[3] else []
        try:
            registry.add(cols[2], variants, kind=kind, entity_id=entity_id)
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None


def read_cluster_manifest(path: str | Path) -> dict[ClusterId, Cluster]:
    path = Path(path)
    clusters: dict[ClusterId, Cluster] = {}
    for lineno, cols in _rows(path):
        if len(cols) < 4:
            raise _fail(path, lineno, "expected cluster_id, language, date, article_count")
        cluster_id = cols[0]
        if cluster_id in clusters:
            raise _fail(path, lineno, f"duplicate cluster {cluster_id!r}")
        try:
            day = date.fromisoformat(cols[2])
            count = int(cols[3])
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None
        medoid = cols[4] if len(cols) > 4 and cols[4] else None
        try:
            clusters[cluster_id] = Cluster(cluster_id, cols[1], day, count, medoid)
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None
    return clusters


def read_occurrences(
    path: str | Path,
    clusters: Mapping[ClusterId, Cluster],
    registry: EntityRegistry,
) -> list[tuple[EntityId, ClusterId]]:
    """Load occurrence records, resolving surfaces through the registry.

    Unseen surface forms are registered as new person entities (ids are
    assigned monotonically); numeric entity fields must already be
    declared. Records naming undeclared clusters or contradicting the
    manifest are rejected with their line number.
    """
    path = Path(path)
    pairs: list[tuple[EntityId, ClusterId]] = []
    for lineno, cols in _rows(path):
        if len(cols) < 4:
            raise _fail(path, lineno, "expected cluster_id, language, date, entity")
        cluster_id, language, day_s, entity_field = cols[0], cols[1], cols[2], cols[3]
        meta = clusters.get(cluster_id)
        if meta is None:
            raise _fail(path, lineno, f"unknown cluster {cluster_id!r}")
        if language != meta.language:
            raise _fail(
                path, lineno,
                f"cluster {cluster_id!r} language {language!r} contradicts manifest {meta.language!r}",
            )
        try:
            day = date.fromisoformat(day_s)
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None
        if day != meta.date:
            raise _fail(
                path, lineno,
                f"cluster {cluster_id!r} date {day_s} contradicts manifest {meta.date}",
            )
        if entity_field.isdigit():
            entity_id = int(entity_field)
            if entity_id not in registry:
                raise _fail(path, lineno, f"undeclared entity id {entity_id}")
        else:
            resolved = registry.resolve(entity_field)
            if resolved is None:
                resolved = registry.add(entity_field).id
            entity_id = resolved
        pairs.append((entity_id, cluster_id))
    return pairs


def read_titles(
    path: str | Path, registry: EntityRegistry | None = None
) -> dict[EntityId, list[TitleAttribution]]:
    path = Path(path)
    titles: dict[EntityId, list[TitleAttribution]] = defaultdict(list)
    for lineno, cols in _rows(path):
        if len(cols) < 4:
            raise _fail(path, lineno, "expected entity_id, language, phrase, count")
        try:
            entity_id = int(cols[0])
            count = int(cols[3])
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None
        if registry is not None and entity_id not in registry:
            raise _fail(path, lineno, f"undeclared entity id {entity_id}")
        try:
            titles[entity_id].append(TitleAttribution(entity_id, cols[2], cols[1], count))
        except ValueError as exc:
            raise _fail(path, lineno, str(exc)) from None
    return dict(titles)


@dataclass
class Snapshot:
    """A self-contained, read-only view of one ingestion run."""

    registry: EntityRegistry
    index: OccurrenceIndex
    titles: dict[EntityId, list[TitleAttribution]] = field(default_factory=dict)

    @classmethod
    def build_from_files(
        cls,
        occurrences: str | Path,
        clusters: str | Path,
        entities: str | Path | None = None,
        titles: str | Path | None = None,
    ) -> Snapshot:
        registry = EntityRegistry()
        if entities is not None:
            read_entities(entities, registry)
        cluster_meta = read_cluster_manifest(clusters)
        pairs = read_occurrences(occurrences, cluster_meta, registry)
        index = OccurrenceIndex.build(pairs, cluster_meta)
        title_table = read_titles(titles, registry) if titles is not None else {}
        return cls(registry=registry, index=index, titles=title_table)

    def save(self, path: str | Path) -> None:
        with open(path, "wb") as fh:
            pickle.dump(self, fh, protocol=pickle.HIGHEST_PROTOCOL)

    @classmethod
    def load(cls, path: str | Path) -> Snapshot:
        with open(path, "rb") as fh:
            snapshot = pickle.load(fh)
        if not isinstance(snapshot, cls):
            raise IngestError(f"{path} is not a {cls.__name__} file")
        return snapshot
