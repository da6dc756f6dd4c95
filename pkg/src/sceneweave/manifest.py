"""Story manifest: one YAML document with title, narrative, entity
registry, and optional pre-segmented fragments."""

from __future__ import annotations

from pathlib import Path

import yaml

from .errors import ManifestError
from .story import Entity, EntityKind, EntityRegistry, Story


def parse_manifest(text: str) -> tuple[Story, list[str] | None]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ManifestError(f"manifest is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a mapping")

    title = data.get("title")
    narrative = data.get("narrative")
    entities = data.get("entities")
    if not isinstance(title, str) or not title.strip():
        raise ManifestError("manifest needs a non-empty 'title'")
    if not isinstance(narrative, str) or not narrative.strip():
        raise ManifestError("manifest needs a non-empty 'narrative'")
    if not isinstance(entities, list) or not entities:
        raise ManifestError("manifest needs a non-empty 'entities' list")

    registry = EntityRegistry()
    for row in entities:
        if not isinstance(row, dict) or "name" not in row or "kind" not in row:
            raise ManifestError("each entity needs 'name' and 'kind'")
        try:
            kind = EntityKind(str(row["kind"]))
        except ValueError:
            raise ManifestError(
                f"unknown entity kind {row['kind']!r} (expected character, "
                "humanoid or reference_object)") from None
        start = row.get("start", (0.0, 0.0, 0.0))
        if not (isinstance(start, (list, tuple)) and len(start) == 3):
            raise ManifestError(f"entity {row['name']!r}: 'start' must be "
                                "a 3-vector")
        registry.add(Entity(
            name=str(row["name"]),
            kind=kind,
            asset_ref=str(row.get("asset_ref", "")),
            start_position=tuple(float(v) for v in start),
        ))

    fragments = data.get("fragments")
    if fragments is not None:
        if not isinstance(fragments, list) \
                or not all(isinstance(f, str) and f.strip() for f in fragments):
            raise ManifestError("'fragments' must be a list of non-empty "
                                "strings")
        fragments = list(fragments)

    return Story(title=title, text=narrative, registry=registry), fragments


def load_manifest(path: str | Path) -> tuple[Story, list[str] | None]:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    return parse_manifest(path.read_text(encoding="utf-8"))


def manifest_document(story: Story, fragments: list[str] | None = None) -> str:
    data = {
        "title": story.title,
        "narrative": story.text,
        "entities": [
            {
                "name": entity.name,
                "kind": entity.kind.value,
                "asset_ref": entity.asset_ref,
                "start": list(entity.start_position),
            }
            for entity in story.registry
        ],
    }
    if fragments:
        data["fragments"] = list(fragments)
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
