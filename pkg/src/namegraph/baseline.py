"""Encyclopedia-derived relation baseline with inverse-link confirmation.

Person pages are read from a local dump (directory tree lang/<id>.html,
never fetched live). A relation (A, B) is confirmed in a language when
A's page links B and B's page links A; the multilingual subset keeps
pairs confirmed in at least two languages.
"""

from __future__ import annotations

import html
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from statistics import mean
from typing import Iterable
from urllib.parse import unquote

from .model import EntityId, EntityKind, EntityRegistry

_ANCHOR = re.compile(r"<a\s[^>]*?href\s*=\s*([\"'])(.*?)\1[^>]*>(.*?)</a>", re.I | re.S)
_TAG = re.compile(r"<[^>]+>")


@dataclass(frozen=True)
class PersonPage:
    """One language version of one person's page, reduced to its person links."""

    entity: EntityId
    language: str
    outlinks: frozenset[EntityId]


@dataclass(frozen=True)
class BaselineRelation:
    """A symmetric person pair with the languages confirming it."""

    a: EntityId
    b: EntityId
    languages: frozenset[str]

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("relation endpoints must satisfy a < b")
        if not self.languages:
            raise ValueError("relation must be confirmed in at least one language")


@dataclass(frozen=True)
class BaselineStats:
    relations: int
    persons: int
    mean_per_person: float
    min_per_person: int
    max_per_person: int


@dataclass(frozen=True)
class PageError:
    path: str
    reason: str


def extract_person_links(
    markup: str,
    entity: EntityId,
    language: str,
    name_db: EntityRegistry,
) -> PersonPage:
    """Keep only hyperlinks that resolve to a known person.

    Each anchor is tried by target first (last path segment, URL-decoded,
    underscores as spaces), then by its visible text. Links to dates,
    countries, images and the like fall out by failing name resolution;
    organization entities and self-links are dropped explicitly.
    Malformed fragments are skipped, not fatal.
    """
    outlinks: set[EntityId] = set()
    for match in _ANCHOR.finditer(markup):
        target, anchor_text = match.group(2), match.group(3)
        resolved = _resolve_target(target, name_db)
        if resolved is None:
            resolved = name_db.resolve(html.unescape(_TAG.sub(" ", anchor_text)))
        if resolved is None or resolved == entity:
            continue
        if name_db.kind(resolved) is not EntityKind.PERSON:
            continue
        outlinks.add(resolved)
    return PersonPage(entity=entity, language=language, outlinks=frozenset(outlinks))


def _resolve_target(target: str, name_db: EntityRegistry) -> EntityId | None:
    candidate = unquote(html.unescape(target)).split("#", 1)[0]
    candidate = candidate.rstrip("/").rsplit("/", 1)[-1]
    return name_db.resolve(candidate.replace("_", " "))


def load_page_dump(
    root: str | Path, name_db: EntityRegistry
) -> tuple[list[PersonPage], list[PageError]]:
    """Parse a lang/<entity_id>.html tree; unreadable pages are recorded
    and skipped."""
    root = Path(root)
    pages: list[PersonPage] = []
    errors: list[PageError] = []
    for path in sorted(root.glob("*/*.html")):
        language = path.parent.name
        try:
            entity = int(path.stem)
            markup = path.read_text(encoding="utf-8")
        except (ValueError, OSError, UnicodeDecodeError) as exc:
            errors.append(PageError(path=str(path), reason=str(exc)))
            continue
        pages.append(extract_person_links(markup, entity, language, name_db))
    return pages, errors


def confirm_relations(pages: Iterable[PersonPage]) -> set[BaselineRelation]:
    """Pairs linked in both directions, with confirming languages accumulated.

    The result does not depend on page processing order; pages for the
    same (entity, language) are merged by union.
    """
    links: dict[tuple[str, EntityId], set[EntityId]] = defaultdict(set)
    for page in pages:
        links[(page.language, page.entity)] |= page.outlinks

    confirmed: dict[tuple[EntityId, EntityId], set[str]] = defaultdict(set)
    for (language, a), outlinks in links.items():
        for b in outlinks:
            if a < b and a in links.get((language, b), ()):
                confirmed[(a, b)].add(language)
    return {
        BaselineRelation(a, b, frozenset(langs))
        for (a, b), langs in confirmed.items()
    }


def multilingual_subset(
    relations: Iterable[BaselineRelation], min_languages: int = 2
) -> set[BaselineRelation]:
    """Relations confirmed in at least min_languages languages."""
    if min_languages < 1:
        raise ValueError("min_languages must be >= 1")
    return {r for r in relations if len(r.languages) >= min_languages}


def baseline_stats(relations: Iterable[BaselineRelation]) -> BaselineStats:
    per_person: dict[EntityId, int] = defaultdict(int)
    total = 0
    for relation in relations:
        total += 1
        per_person[relation.a] += 1
        per_person[relation.b] += 1
    if not per_person:
        return BaselineStats(0, 0, 0.0, 0, 0)
    counts = list(per_person.values())
    return BaselineStats(
        relations=total,
        persons=len(per_person),
        mean_per_person=float(mean(counts)),
        min_per_person=min(counts),
        max_per_person=max(counts),
    )


def relations_by_person(
    relations: Iterable[BaselineRelation],
) -> dict[EntityId, set[EntityId]]:
    """Partner sets per person (symmetric view of the relation set)."""
    partners: dict[EntityId, set[EntityId]] = defaultdict(set)
    for relation in relations:
        partners[relation.a].add(relation.b)
        partners[relation.b].add(relation.a)
    return dict(partners)


def write_relations(relations: Iterable[BaselineRelation], path: str | Path) -> None:
    """One relation per line: a, b, comma-joined languages (tab-separated)."""
    rows = sorted(relations, key=lambda r: (r.a, r.b))
    with open(path, "w", encoding="utf-8") as fh:
        for relation in rows:
            langs = ",".join(sorted(relation.languages))
            fh.write(f"{relation.a}\t{relation.b}\t{langs}\n")


def read_relations(path: str | Path) -> set[BaselineRelation]:
    relations: set[BaselineRelation] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise ValueError(f"{path}:{lineno}: expected a, b, languages")
            a, b = int(cols[0]), int(cols[1])
            if a > b:
                a, b = b, a
            relations.add(BaselineRelation(a, b, frozenset(cols[2].split(","))))
    return relations
