"""Condition-constrained story continuation with executability validation.

New fragments are accepted only if they can actually be staged: each one
is dry-run through the planning path (not keyword-matched), so an accepted
continuation is guaranteed to compile into the timeline.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ParseError
from .gateway import PromptContext, build_prompt, extract_json_block
from .story import EventWindow, Story, normalize_whitespace, resolve_entities

logger = logging.getLogger(__name__)

DEFAULT_FRAGMENTS_HINT = 2


@dataclass(frozen=True)
class ContinuationRequest:
    story: Story
    condition: str
    n_fragments_hint: int | None = None

    def __post_init__(self):
        if not self.condition.strip():
            raise ValueError("continuation condition must be non-empty")


@dataclass(frozen=True)
class ContinuationResult:
    fragments: tuple[str, ...]
    reasoning: str

    def __post_init__(self):
        if not self.fragments:
            raise ValueError("continuation must produce fragments")
        if not self.reasoning.strip():
            raise ValueError("continuation must carry reasoning")


def continuation_user_text(request: ContinuationRequest) -> str:
    hint = request.n_fragments_hint or DEFAULT_FRAGMENTS_HINT
    cast = ", ".join(
        f"{e.name} ({e.kind.value})" for e in request.story.registry)
    return (
        f"Existing story ({request.story.title}):\n{request.story.text}\n\n"
        f"Cast: {cast}\n"
        f"Continuing condition: {request.condition}\n"
        f"Write about {hint} new fragment(s)."
    )


def continue_story(request: ContinuationRequest, backend,
                   context: PromptContext | None = None) -> ContinuationResult:
    context = context or PromptContext.default()
    bundle = build_prompt("continuation", context,
                          continuation_user_text(request))
    response = backend.complete(bundle)
    data = extract_json_block(response.text)
    reasoning = data.get("reasoning")
    fragments = data.get("fragments")
    if not isinstance(reasoning, str) or not reasoning.strip():
        raise ParseError("continuation answer lacks a reasoning block",
                         response.text)
    if not isinstance(fragments, list) or not fragments \
            or not all(isinstance(f, str) and f.strip() for f in fragments):
        raise ParseError("continuation answer lacks a fragments list",
                         response.text)
    return ContinuationResult(
        fragments=tuple(normalize_whitespace(f) for f in fragments),
        reasoning=reasoning.strip(),
    )


@dataclass
class ContinuationValidation:
    ok: bool
    violations: list[str] = field(default_factory=list)
    plans: list = field(default_factory=list)  # WindowPlan per valid fragment


def validate_continuation(result: ContinuationResult, story: Story,
                          planner, start_index: int = 0) -> ContinuationValidation:
    """Dry-run every new fragment through the planner.

    A fragment passes when it yields a valid window plan; planner errors
    become per-fragment violations. Accepted continuations are therefore
    closed under the pipeline: they compile.
    """
    violations: list[str] = []
    plans = []
    for offset, fragment in enumerate(result.fragments):
        window = EventWindow(
            index=start_index + offset,
            text=fragment,
            entities_mentioned=tuple(
                resolve_entities(fragment, story.registry)),
        )
        try:
            plans.append(planner.plan_window(window))
        except Exception as exc:
            violations.append(
                f"fragment {offset} not executable by libraries: {exc}")
    return ContinuationValidation(ok=not violations, violations=violations,
                                  plans=plans)


def extended_story(story: Story, result: ContinuationResult) -> Story:
    new_text = story.text.rstrip() + "\n\n" + "\n\n".join(result.fragments)
    return Story(title=story.title, text=new_text, registry=story.registry)
