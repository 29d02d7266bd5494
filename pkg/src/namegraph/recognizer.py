"""Pattern-based person-name recognition over plain text.

Three methods, in precedence order when spans overlap:

  (a) known:      longest match against the supplied name gazetteer;
  (b) first_name: a known first name followed by capitalized words;
  (c) trigger:    local patterns (titles, professions, country
                  adjectives, small regexes) licensing an adjacent
                  capitalized word run.

The recognizer targets languages that capitalize proper names. It is
deliberately shallow: tokens are whitespace chunks with leading and
trailing punctuation stripped, and sentence-initial capitalized words
are not excluded (accepted noise; doing better would need sentence
segmentation).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .model import EntityId, TitleAttribution, normalize_surface

# Longest token window a regex trigger may span.
_MAX_REGEX_TOKENS = 6

# Trailing punctuation that ends a capitalized run (guessed names never
# cross a clause boundary; known names may).
_RUN_BREAK = set(".,;:!?")


class RecognizerConfigError(ValueError):
    """A pattern pack or recognizer config cannot be compiled."""


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class TriggerCategory(str, Enum):
    TITLE = "title"
    COUNTRY_ADJECTIVE = "country_adjective"
    PROFESSION = "profession"
    REGEX_PATTERN = "regex_pattern"


class MentionMethod(str, Enum):
    KNOWN = "known"
    FIRST_NAME = "first_name"
    TRIGGER = "trigger"


_PRECEDENCE = {
    MentionMethod.KNOWN: 0,
    MentionMethod.FIRST_NAME: 1,
    MentionMethod.TRIGGER: 2,
}


@dataclass(frozen=True)
class TriggerPattern:
    phrase: str
    side: Side
    category: TriggerCategory
    language: str = "en"

    def __post_init__(self) -> None:
        if not self.phrase:
            raise RecognizerConfigError("trigger phrase is empty")


@dataclass(frozen=True)
class Mention:
    surface: str
    span: tuple[int, int]
    method: MentionMethod
    attached_triggers: tuple[str, ...] = ()


@dataclass(frozen=True)
class RecognizerConfig:
    known_names: Mapping[str, EntityId]
    first_names: frozenset[str] = frozenset()
    triggers: tuple[TriggerPattern, ...] = ()
    max_name_tokens: int = 4

    def __post_init__(self) -> None:
        if self.max_name_tokens < 2:
            raise RecognizerConfigError("max_name_tokens must be >= 2")
        for trigger in self.triggers:
            if trigger.category is TriggerCategory.REGEX_PATTERN:
                try:
                    re.compile(trigger.phrase)
                except re.error as exc:
                    raise RecognizerConfigError(
                        f"bad regex trigger {trigger.phrase!r}: {exc}"
                    ) from None


@dataclass(frozen=True)
class Token:
    text: str  # punctuation-stripped core; may be empty for bare punctuation
    start: int
    end: int
    trailing: str

    @property
    def capitalized(self) -> bool:
        return bool(self.text) and self.text[0].isupper()

    @property
    def breaks_run(self) -> bool:
        return any(ch in _RUN_BREAK for ch in self.trailing)


def tokenize(text: str) -> list[Token]:
    """Whitespace chunks with leading/trailing punctuation stripped."""
    tokens = []
    for match in re.finditer(r"\S+", text):
        chunk = match.group()
        left = 0
        right = len(chunk)
        while left < right and not chunk[left].isalnum():
            left += 1
        while right > left and not chunk[right - 1].isalnum():
            right -= 1
        tokens.append(
            Token(
                text=chunk[left:right],
                start=match.start() + left,
                end=match.start() + right,
                trailing=chunk[right:],
            )
        )
    return tokens


@dataclass(frozen=True)
class _Candidate:
    start_tok: int
    end_tok: int  # inclusive
    method: MentionMethod
    attached: tuple[str, ...] = ()


class Recognizer:
    """Compiled form of a RecognizerConfig, reusable across documents."""

    def __init__(self, config: RecognizerConfig) -> None:
        self.config = config
        self._known: dict[str, list[tuple[tuple[str, ...], EntityId]]] = {}
        for surface, entity in config.known_names.items():
            cores = _phrase_cores(surface)
            if not cores:
                continue
            self._known.setdefault(cores[0], []).append((cores, entity))
        for bucket in self._known.values():
            bucket.sort(key=lambda item: -len(item[0]))

        self._literal: dict[Side, dict[tuple[str, ...], str]] = {Side.LEFT: {}, Side.RIGHT: {}}
        self._regex: dict[Side, list[tuple[re.Pattern, str]]] = {Side.LEFT: [], Side.RIGHT: []}
        self._max_literal = 1
        for trigger in config.triggers:
            if trigger.category is TriggerCategory.REGEX_PATTERN:
                self._regex[trigger.side].append((re.compile(trigger.phrase), trigger.phrase))
            else:
                cores = _phrase_cores(trigger.phrase)
                if cores:
                    self._literal[trigger.side][cores] = trigger.phrase
                    self._max_literal = max(self._max_literal, len(cores))

    # -- public API --------------------------------------------------------

    def recognize(self, text: str) -> list[Mention]:
        tokens = tokenize(text)
        candidates = self._known_candidates(tokens)
        candidates += self._first_name_candidates(tokens)
        candidates += self._trigger_candidates(tokens)
        chosen = _resolve_overlaps(candidates)
        mentions = []
        for cand in sorted(chosen, key=lambda c: c.start_tok):
            attached = cand.attached
            if cand.method is not MentionMethod.TRIGGER:
                attached = self._adjacent_triggers(tokens, cand)
            start = tokens[cand.start_tok].start
            end = tokens[cand.end_tok].end
            mentions.append(
                Mention(
                    surface=text[start:end],
                    span=(start, end),
                    method=cand.method,
                    attached_triggers=attached,
                )
            )
        return mentions

    def resolve_mention(self, mention: Mention) -> EntityId | None:
        return self.config.known_names.get(normalize_surface(mention.surface))

    # -- candidate generation ---------------------------------------------

    def _known_candidates(self, tokens: list[Token]) -> list[_Candidate]:
        found = []
        for i in range(len(tokens)):
            bucket = self._known.get(tokens[i].text)
            if not bucket:
                continue
            for cores, _entity in bucket:
                j = i + len(cores)
                if j <= len(tokens) and tuple(t.text for t in tokens[i:j]) == cores:
                    found.append(_Candidate(i, j - 1, MentionMethod.KNOWN))
                    break  # longest match at this start
        return found

    def _first_name_candidates(self, tokens: list[Token]) -> list[_Candidate]:
        found = []
        limit = self.config.max_name_tokens - 1
        for i, token in enumerate(tokens):
            if not token.capitalized or token.text not in self.config.first_names:
                continue
            end = self._extend_run(tokens, i, limit)
            if end > i:
                found.append(_Candidate(i, end, MentionMethod.FIRST_NAME))
        return found

    def _trigger_candidates(self, tokens: list[Token]) -> list[_Candidate]:
        merged: dict[tuple[int, int], list[str]] = {}
        max_len = self.config.max_name_tokens
        for i, token in enumerate(tokens):
            if not token.capitalized:
                continue
            chain = self._chain(tokens, Side.LEFT, i)
            if chain:
                end = self._extend_run(tokens, i, max_len - 1)
                if end >= i + 1:  # a guessed name needs two tokens
                    merged.setdefault((i, end), []).extend(chain)
        for j, token in enumerate(tokens):
            if not token.capitalized:
                continue
            chain = self._chain(tokens, Side.RIGHT, j + 1)
            if chain:
                start = self._extend_run_back(tokens, j, max_len - 1)
                if start <= j - 1:
                    merged.setdefault((start, j), []).extend(chain)
        return [
            _Candidate(start, end, MentionMethod.TRIGGER, tuple(dict.fromkeys(chain)))
            for (start, end), chain in merged.items()
        ]

    def _extend_run(self, tokens: list[Token], start: int, extra: int) -> int:
        """Last index of the capitalized run beginning at start, taking at
        most `extra` additional tokens and never crossing clause punctuation."""
        end = start
        while (
            end - start < extra
            and end + 1 < len(tokens)
            and tokens[end + 1].capitalized
            and not tokens[end].breaks_run
        ):
            end += 1
        return end

    def _extend_run_back(self, tokens: list[Token], end: int, extra: int) -> int:
        start = end
        while (
            end - start < extra
            and start - 1 >= 0
            and tokens[start - 1].capitalized
            and not tokens[start - 1].breaks_run
        ):
            start -= 1
        return start

    def _chain(self, tokens: list[Token], side: Side, boundary: int) -> list[str]:
        """Maximal run of trigger phrases touching the name boundary.

        For LEFT the chain ends exactly at `boundary` (exclusive); for
        RIGHT it starts at `boundary`. Phrases are returned in text order.
        """
        phrases: list[str] = []
        if side is Side.LEFT:
            pos = boundary
            while pos > 0:
                match = self._match_ending_at(tokens, pos, side)
                if match is None:
                    break
                phrase, length = match
                phrases.append(phrase)
                pos -= length
            phrases.reverse()
        else:
            pos = boundary
            while pos < len(tokens):
                match = self._match_starting_at(tokens, pos, side)
                if match is None:
                    break
                phrase, length = match
                phrases.append(phrase)
                pos += length
        return phrases

    def _match_ending_at(
        self, tokens: list[Token], end: int, side: Side
    ) -> tuple[str, int] | None:
        for length in range(min(self._window(side), end), 0, -1):
            phrase = self._match_at(tokens, end - length, length, side)
            if phrase is not None:
                return phrase, length
        return None

    def _match_starting_at(
        self, tokens: list[Token], start: int, side: Side
    ) -> tuple[str, int] | None:
        for length in range(min(self._window(side), len(tokens) - start), 0, -1):
            phrase = self._match_at(tokens, start, length, side)
            if phrase is not None:
                return phrase, length
        return None

    def _window(self, side: Side) -> int:
        return max(self._max_literal, _MAX_REGEX_TOKENS if self._regex[side] else 0)

    def _match_at(self, tokens: list[Token], start: int, length: int, side: Side) -> str | None:
        cores = tuple(t.text for t in tokens[start : start + length])
        if any(not c for c in cores):
            return None
        phrase = self._literal[side].get(cores)
        if phrase is not None:
            return phrase
        joined = " ".join(cores)
        for pattern, raw in self._regex[side]:
            if pattern.fullmatch(joined):
                return raw
        return None

    def _adjacent_triggers(self, tokens: list[Token], cand: _Candidate) -> tuple[str, ...]:
        """Triggers within three tokens of a known/first-name mention,
        harvested for title attribution."""
        attached: list[str] = []
        for boundary in (cand.start_tok, cand.start_tok - 1, cand.start_tok - 2):
            if boundary < 1:
                break
            chain = self._chain(tokens, Side.LEFT, boundary)
            if chain:
                attached.extend(chain)
                break
        for boundary in (cand.end_tok + 1, cand.end_tok + 2, cand.end_tok + 3):
            if boundary > len(tokens) - 1:
                break
            chain = self._chain(tokens, Side.RIGHT, boundary)
            if chain:
                attached.extend(chain)
                break
        return tuple(dict.fromkeys(attached))


def recognize(text: str, config: RecognizerConfig) -> list[Mention]:
    """Non-overlapping mentions, ordered by span start."""
    return Recognizer(config).recognize(text)


def _resolve_overlaps(candidates: list[_Candidate]) -> list[_Candidate]:
    """Greedy selection: method precedence, then longest span, then leftmost."""
    ordered = sorted(
        candidates,
        key=lambda c: (
            _PRECEDENCE[c.method],
            -(c.end_tok - c.start_tok),
            c.start_tok,
        ),
    )
    taken: list[_Candidate] = []
    for cand in ordered:
        if all(cand.end_tok < t.start_tok or cand.start_tok > t.end_tok for t in taken):
            taken.append(cand)
    return taken


def _phrase_cores(phrase: str) -> tuple[str, ...]:
    return tuple(t.text for t in tokenize(normalize_surface(phrase)) if t.text)


def harvest_contexts(
    texts: Iterable[str],
    known: Mapping[str, EntityId],
    window: int,
) -> list[tuple[str, Side, int]]:
    """Context phrases around known-name occurrences, most frequent first.

    Raw material for extending trigger packs by bootstrapping: each
    occurrence contributes its left and right neighbor phrase of up to
    `window` tokens. Ties are broken by phrase, then side.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    matcher = Recognizer(RecognizerConfig(known_names=dict(known)))
    counts: Counter[tuple[str, Side]] = Counter()
    for text in texts:
        tokens = tokenize(text)
        occurrences = _resolve_overlaps(matcher._known_candidates(tokens))
        for occ in occurrences:
            left = [t.text for t in tokens[: occ.start_tok] if t.text][-window:]
            if left:
                counts[(" ".join(left), Side.LEFT)] += 1
            right = [t.text for t in tokens[occ.end_tok + 1 :] if t.text][:window]
            if right:
                counts[(" ".join(right), Side.RIGHT)] += 1
    return sorted(
        ((phrase, side, count) for (phrase, side), count in counts.items()),
        key=lambda row: (-row[2], row[0], row[1]),
    )


def collect_title_attributions(
    mentions_with_entities: Iterable[tuple[Mention, EntityId]],
    language: str,
) -> list[TitleAttribution]:
    """Aggregate attached trigger phrases into per-entity title counts."""
    counts: Counter[tuple[EntityId, str]] = Counter()
    for mention, entity in mentions_with_entities:
        for phrase in mention.attached_triggers:
            counts[(entity, phrase)] += 1
    return [
        TitleAttribution(entity=entity, phrase=phrase, language=language, count=count)
        for (entity, phrase), count in sorted(counts.items())
    ]


# -- pattern pack files ----------------------------------------------------
#
#   triggers:    phrase  side  category        (tab-separated, one per line)
#   first names: one name per line
#   known names: surface  entity_id


def load_trigger_pack(path: str | Path, language: str) -> tuple[TriggerPattern, ...]:
    path = Path(path)
    triggers = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise RecognizerConfigError(f"{path}:{lineno}: expected phrase, side, category")
        try:
            trigger = TriggerPattern(cols[0], Side(cols[1]), TriggerCategory(cols[2]), language)
            if trigger.category is TriggerCategory.REGEX_PATTERN:
                re.compile(trigger.phrase)
        except (ValueError, re.error) as exc:
            raise RecognizerConfigError(f"{path}:{lineno}: {exc}") from None
        triggers.append(trigger)
    return tuple(triggers)


def load_first_names(path: str | Path) -> frozenset[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(
        normalize_surface(line) for line in lines if line.strip() and not line.startswith("#")
    )


def load_known_names(path: str | Path) -> dict[str, EntityId]:
    known: dict[str, EntityId] = {}
    path = Path(path)
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise RecognizerConfigError(f"{path}:{lineno}: expected surface, entity_id")
        try:
            known[normalize_surface(cols[0])] = int(cols[1])
        except ValueError:
            raise RecognizerConfigError(f"{path}:{lineno}: bad entity id {cols[1]!r}") from None
    return known
