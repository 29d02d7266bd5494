"""Relation scoring: related lists, weighted associated lists, titles, VIPs.

Two rankings per person. The *related* list orders partners by raw
cluster co-occurrence, so globally frequent names dominate it. The
*associated* list orders by

    w = (1 + ln c12) * (2 c12 / (c1 + c2)) * 1 / (1 + ln(a1 * a2))

which damps partners that appear in many clusters without the subject
(the middle factor) or that co-occur with many distinct people (the
last factor). Natural logarithm throughout. The weight is strictly
positive for any co-occurring pair and has no upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .model import EntityId, TitleAttribution
from .store import OccurrenceIndex


class Mode(str, Enum):
    RELATED = "related"
    ASSOCIATED = "associated"


@dataclass(frozen=True)
class RelationEdge:
    """A scored co-occurring pair. co_count >= 1, weight > 0, both symmetric."""

    a: EntityId
    b: EntityId
    co_count: int
    weight: float


@dataclass(frozen=True)
class RankedList:
    """Partners of one subject, sorted score-descending, ties by entity id."""

    subject: EntityId
    entries: tuple[tuple[EntityId, float], ...]
    mode: Mode


def co_weight(c12: int) -> float:
    """Logarithmic co-occurrence weight 1 + ln(c12)."""
    if c12 < 1:
        raise ValueError(f"co-cluster count must be >= 1, got {c12}")
    return 1.0 + math.log(c12)


def icf(c12: int, c1: int, c2: int) -> float:
    """Inverse cluster frequency 2*c12 / (c1 + c2), in (0, 1]."""
    if c12 < 1:
        raise ValueError(f"co-cluster count must be >= 1, got {c12}")
    if c1 < c12 or c2 < c12:
        raise ValueError(
            f"marginals must bound the co-count: c12={c12}, c1={c1}, c2={c2}"
        )
    return 2.0 * c12 / (c1 + c2)


def iass(a1: int, a2: int) -> float:
    """Inverse association frequency 1 / (1 + ln(a1*a2)), in (0, 1]."""
    if a1 < 1 or a2 < 1:
        raise ValueError(f"associate counts must be >= 1, got {a1}, {a2}")
    return 1.0 / (1.0 + math.log(a1 * a2))


def association_weight(index: OccurrenceIndex, e1: EntityId, e2: EntityId) -> float:
    """Specific association weight between two co-occurring entities."""
    c12 = index.co_cluster_count(e1, e2)
    if c12 < 1:
        raise ValueError(f"entities {e1} and {e2} never co-occur")
    return (
        co_weight(c12)
        * icf(c12, index.cluster_freq[e1], index.cluster_freq[e2])
        * iass(index.associate_count[e1], index.associate_count[e2])
    )


def related(index: OccurrenceIndex, entity: EntityId, n: int) -> RankedList:
    """Top-n partners by co-cluster count."""
    _check_rank(n)
    entries = tuple((p, float(c)) for p, c in index.neighbors(entity)[:n])
    return RankedList(subject=entity, entries=entries, mode=Mode.RELATED)


def associated(index: OccurrenceIndex, entity: EntityId, n: int) -> RankedList:
    """Top-n partners by association weight.

    Weights for all partners are evaluated in one vectorized pass; the
    formula and evaluation order match association_weight() exactly.
    """
    _check_rank(n)
    counts = index.partner_counts(entity)
    if not counts:
        return RankedList(subject=entity, entries=(), mode=Mode.ASSOCIATED)

    partners = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
    c12 = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
    cf = index.cluster_freq
    ac = index.associate_count
    c_other = np.fromiter((cf[int(p)] for p in partners), dtype=np.float64, count=len(partners))
    a_other = np.fromiter((ac[int(p)] for p in partners), dtype=np.float64, count=len(partners))
    c_self = cf[entity]
    a_self = ac[entity]

    weights = (
        (1.0 + np.log(c12))
        * (2.0 * c12 / (c_self + c_other))
        * (1.0 / (1.0 + np.log(a_self * a_other)))
    )

    order = np.lexsort((partners, -weights))[:n]
    entries = tuple((int(partners[i]), float(weights[i])) for i in order)
    return RankedList(subject=entity, entries=entries, mode=Mode.ASSOCIATED)


def ranked(index: OccurrenceIndex, entity: EntityId, n: int, mode: Mode) -> RankedList:
    if mode is Mode.RELATED:
        return related(index, entity, n)
    return associated(index, entity, n)


def relation_edges(
    index: OccurrenceIndex, subject: EntityId, partners: Sequence[EntityId]
) -> list[RelationEdge]:
    """Scored edges among subject+partners for every co-occurring pair."""
    nodes = [subject, *partners]
    edges = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            c12 = index.co_cluster_count(a, b)
            if c12 >= 1:
                lo, hi = (a, b) if a < b else (b, a)
                edges.append(RelationEdge(lo, hi, c12, association_weight(index, a, b)))
    return edges


def top_titles(
    titles: Mapping[EntityId, Sequence[TitleAttribution]], entity: EntityId, k: int
) -> list[TitleAttribution]:
    """Top-k title phrases for an entity, by count then (language, phrase)."""
    _check_rank(k)
    mine = titles.get(entity, ())
    return sorted(mine, key=lambda t: (-t.count, t.language, t.phrase))[:k]


def vip_list(
    index: OccurrenceIndex, day: date, k: int
) -> list[tuple[EntityId, int]]:
    """Entities mentioned in the most clusters on `day`, ties by id."""
    _check_rank(k)
    counts: dict[EntityId, int] = {}
    for cluster in index.clusters_on(day):
        for entity in index.cluster_members.get(cluster, ()):
            counts[entity] = counts.get(entity, 0) + 1
    ranked_entities = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked_entities[:k]


def _check_rank(n: int) -> None:
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
