"""Core story representation: entities, narrative, and event windows.

A story is segmented into event windows, each planned independently by the
agents. Segmentation is either rule-based (deterministic) or LLM-backed
with an optional fall back to the rule.
"""

from __future__ import annotations

import enum
import json
import logging
import re
from dataclasses import dataclass

from .errors import ManifestError, ParseError, SegmentationError

logger = logging.getLogger(__name__)

# Paragraphs longer than this are re-split at sentence boundaries.
MAX_PARAGRAPH_CHARS = 400


class EntityKind(str, enum.Enum):
    CHARACTER = "character"
    HUMANOID = "humanoid"
    REFERENCE_OBJECT = "reference_object"


@dataclass(frozen=True)
class Entity:
    """A named scene entity backed by a pre-selected 3D asset.

    Only humanoid entities are eligible for motion assignments.
    """

    name: str
    kind: EntityKind
    asset_ref: str = ""
    start_position: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.name.strip():
            raise ManifestError("entity name must be non-empty")


class EntityRegistry:
    """Ordered entity collection with case-insensitive unique names."""

    def __init__(self, entities: list[Entity] | None = None):
        self._entities: list[Entity] = []
        self._by_folded: dict[str, Entity] = {}
        for entity in entities or []:
            self.add(entity)

    def add(self, entity: Entity) -> None:
        folded = entity.name.casefold()
        if folded in self._by_folded:
            raise ManifestError(f"duplicate entity name: {entity.name!r}")
        self._entities.append(entity)
        self._by_folded[folded] = entity

    def get(self, name: str) -> Entity | None:
        return self._by_folded.get(name.casefold())

    def names(self) -> list[str]:
        return [e.name for e in self._entities]

    def __iter__(self):
        return iter(self._entities)

    def __len__(self) -> int:
        return len(self._entities)

    def __contains__(self, name: str) -> bool:
        return name.casefold() in self._by_folded


@dataclass
class Story:
    title: str
    text: str
    registry: EntityRegistry

    def __post_init__(self):
        if not self.text.strip():
            raise ManifestError("story text must be non-empty")


@dataclass(frozen=True)
class EventWindow:
    """One story fragment planned as an independent unit."""

    index: int
    text: str
    entities_mentioned: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.text.strip():
            raise ManifestError(f"event window {self.index} has empty text")


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def resolve_entities(window_text: str, registry: EntityRegistry) -> list[str]:
    """Entity names whose surface form occurs in the text, registry order.

    Case-insensitive whole-substring match; no coreference resolution.
    """
    folded = window_text.casefold()
    return [e.name for e in registry if e.name.casefold() in folded]


_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])(?![.!?])\s+")
_PARAGRAPH_BREAK = re.compile(r"\n\s*\n")


def _split_long_paragraph(paragraph: str) -> list[str]:
    """Greedily pack sentences into chunks of at most MAX_PARAGRAPH_CHARS."""
    sentences = [s for s in _SENTENCE_BOUNDARY.split(paragraph) if s.strip()]
    if len(sentences) <= 1:
        return [paragraph]
    chunks: list[str] = []
    current = ""
    for sentence in sentences:
        candidate = f"{current} {sentence}".strip() if current else sentence
        if current and len(candidate) > MAX_PARAGRAPH_CHARS:
            chunks.append(current)
            current = sentence
        else:
            current = candidate
    if current:
        chunks.append(current)
    return chunks


class RuleSegmenter:
    """Deterministic fallback: blank-line paragraphs, then sentence packing."""

    def fragments(self, text: str) -> list[str]:
        paragraphs = [p for p in _PARAGRAPH_BREAK.split(text) if p.strip()]
        fragments: list[str] = []
        for paragraph in paragraphs:
            cleaned = normalize_whitespace(paragraph)
            if len(cleaned) > MAX_PARAGRAPH_CHARS:
                fragments.extend(_split_long_paragraph(cleaned))
            else:
                fragments.append(cleaned)
        return fragments


class LlmSegmenter:
    """Splits on LLM parsing results; optionally falls back to the rule.

    The backend answer must carry a ``fragments`` list whose concatenation
    reproduces the story text up to whitespace; anything else counts as
    malformed output.
    """

    def __init__(self, backend, context, fallback: bool = True):
        self.backend = backend
        self.context = context
        self.fallback = fallback
        self._rule = RuleSegmenter()

    def fragments(self, text: str) -> list[str]:
        from .gateway import build_prompt, extract_json_block

        try:
            bundle = build_prompt("segmenter", self.context, text)
            response = self.backend.complete(bundle)
            data = extract_json_block(response.text)
            fragments = data.get("fragments")
            if not isinstance(fragments, list) or not fragments:
                raise ParseError("segmenter answer lacks a fragments list",
                                 response.text)
            fragments = [normalize_whitespace(str(f)) for f in fragments]
            if any(not f for f in fragments):
                raise ParseError("segmenter produced an empty fragment",
                                 response.text)
            joined = normalize_whitespace(" ".join(fragments))
            if joined != normalize_whitespace(text):
                raise ParseError(
                    "segmenter fragments do not reassemble the story",
                    response.text)
            return fragments
        except Exception as exc:
            if self.fallback:
                logger.warning("llm segmenter failed (%s); using rule fallback", exc)
                return self._rule.fragments(text)
            raise SegmentationError(str(exc)) from exc


def segment_story(story: Story, segmenter) -> list[EventWindow]:
    """Split the narrative into event windows with resolved entity mentions."""
    fragments = segmenter.fragments(story.text)
    if not fragments:
        raise SegmentationError("segmentation produced no fragments")
    windows = []
    for index, fragment in enumerate(fragments):
        windows.append(EventWindow(
            index=index,
            text=fragment,
            entities_mentioned=tuple(resolve_entities(fragment, story.registry)),
        ))
    return windows


def windows_from_fragments(fragments: list[str], registry: EntityRegistry) -> list[EventWindow]:
    """Build windows from pre-segmented fragments (manifest-provided)."""
    return [
        EventWindow(
            index=i,
            text=normalize_whitespace(fragment),
            entities_mentioned=tuple(resolve_entities(fragment, registry)),
        )
        for i, fragment in enumerate(fragments)
    ]


def window_record(window: EventWindow) -> dict:
    return {
        "index": window.index,
        "text": window.text,
        "entities_mentioned": list(window.entities_mentioned),
    }


def dump_window(window: EventWindow) -> str:
    return json.dumps(window_record(window), sort_keys=True)
