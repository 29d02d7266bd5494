"""Precision/recall-at-rank scoring of rankings against a relation baseline.

For each evaluated person and rank N, the top-N automatic partners are
compared with the person's baseline partner set: precision is the hit
ratio over the entries actually returned (at most N), recall the hit
ratio over the baseline partners. Reports are macro-averages over
persons by default; micro-averaging (pooling hits and totals across
persons) is available behind a flag and the report labels which was
used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .baseline import BaselineRelation, relations_by_person
from .linker import Mode, ranked
from .model import EntityId, EntityKind
from .store import OccurrenceIndex

DEFAULT_RANKS = (1, 2, 3, 4, 5, 10, 20, 30, 50, 75, 100)


class EvaluationError(ValueError):
    """The baseline is empty after filtering, or the config is unusable."""


@dataclass(frozen=True)
class EvalConfig:
    ranks: tuple[int, ...] = DEFAULT_RANKS
    mode: Mode = Mode.ASSOCIATED
    averaging: str = "macro"  # or "micro"

    def __post_init__(self) -> None:
        if not self.ranks or any(r < 1 for r in self.ranks):
            raise EvaluationError("ranks must be positive")
        if list(self.ranks) != sorted(self.ranks):
            raise EvaluationError("ranks must be ascending")
        if self.averaging not in ("macro", "micro"):
            raise EvaluationError(f"unknown averaging {self.averaging!r}")


@dataclass(frozen=True)
class RankScore:
    precision: float
    recall: float


@dataclass(frozen=True)
class EvalReport:
    mode: Mode
    averaging: str
    per_rank: dict[int, RankScore]
    persons_evaluated: int
    baseline_size: int


def evaluate(
    index: OccurrenceIndex,
    baseline: Iterable[BaselineRelation],
    config: EvalConfig = EvalConfig(),
    kinds: Mapping[EntityId, EntityKind] | None = None,
) -> EvalReport:
    """Score one ranking mode against the baseline.

    Persons evaluated are the baseline persons known to the index (and of
    person kind, when kinds are supplied). A person whose automatic list
    is empty counts as zero precision and zero recall rather than being
    dropped.
    """
    relations = set(baseline)
    persons = _filter_persons(relations, index, kinds)
    if not persons:
        raise EvaluationError("no baseline persons remain after filtering")
    partners = relations_by_person(relations)

    max_rank = max(config.ranks)
    per_person_hits: dict[EntityId, list[int]] = {}
    per_person_returned: dict[EntityId, list[int]] = {}
    for person in persons:
        truth = partners[person]
        top = [e for e, _ in ranked(index, person, max_rank, config.mode).entries]
        hits_at = []
        returned_at = []
        hits = 0
        for rank in config.ranks:
            prefix = top[:rank]
            hits = sum(1 for e in prefix if e in truth)
            hits_at.append(hits)
            returned_at.append(len(prefix))
        per_person_hits[person] = hits_at
        per_person_returned[person] = returned_at

    per_rank: dict[int, RankScore] = {}
    for i, rank in enumerate(config.ranks):
        precisions = []
        recalls = []
        hit_total = returned_total = truth_total = 0
        for person in persons:
            hits = per_person_hits[person][i]
            returned = per_person_returned[person][i]
            truth_size = len(partners[person])
            precisions.append(hits / returned if returned else 0.0)
            recalls.append(hits / truth_size)
            hit_total += hits
            returned_total += returned
            truth_total += truth_size
        if config.averaging == "macro":
            per_rank[rank] = RankScore(
                precision=sum(precisions) / len(persons),
                recall=sum(recalls) / len(persons),
            )
        else:
            per_rank[rank] = RankScore(
                precision=hit_total / returned_total if returned_total else 0.0,
                recall=hit_total / truth_total if truth_total else 0.0,
            )

    return EvalReport(
        mode=config.mode,
        averaging=config.averaging,
        per_rank=per_rank,
        persons_evaluated=len(persons),
        baseline_size=len(relations),
    )


def compare_modes(
    index: OccurrenceIndex,
    baseline: Iterable[BaselineRelation],
    config: EvalConfig = EvalConfig(),
    kinds: Mapping[EntityId, EntityKind] | None = None,
) -> tuple[EvalReport, EvalReport]:
    """Run both rankings over the identical person set."""
    relations = set(baseline)
    reports = []
    for mode in (Mode.RELATED, Mode.ASSOCIATED):
        cfg = EvalConfig(ranks=config.ranks, mode=mode, averaging=config.averaging)
        reports.append(evaluate(index, relations, cfg, kinds))
    related_report, associated_report = reports
    assert related_report.persons_evaluated == associated_report.persons_evaluated
    return related_report, associated_report


def format_comparison(related_report: EvalReport, associated_report: EvalReport) -> str:
    """Side-by-side table: rank, related P/R, associated P/R."""
    lines = [
        "rank\trelated_precision\trelated_recall\tassociated_precision\tassociated_recall"
    ]
    for rank in sorted(related_report.per_rank):
        r = related_report.per_rank[rank]
        a = associated_report.per_rank[rank]
        lines.append(
            f"{rank:02d}\t{r.precision:.2f}\t{r.recall:.2f}\t{a.precision:.2f}\t{a.recall:.2f}"
        )
    lines.append(
        f"# persons={related_report.persons_evaluated}"
        f" baseline={related_report.baseline_size}"
        f" averaging={related_report.averaging}"
    )
    return "\n".join(lines) + "\n"


def _filter_persons(
    relations: set[BaselineRelation],
    index: OccurrenceIndex,
    kinds: Mapping[EntityId, EntityKind] | None,
) -> list[EntityId]:
    mentioned = {e for r in relations for e in (r.a, r.b)}
    persons = []
    for entity in sorted(mentioned):
        if entity not in index:
            continue
        if kinds is not None and kinds.get(entity) is not EntityKind.PERSON:
            continue
        persons.append(entity)
    return persons
