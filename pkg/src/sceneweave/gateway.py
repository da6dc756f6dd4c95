"""Chat-completion backends and prompt assembly.

Prompts are assembled from a template store plus the library context
blocks: per-library introduction, function list, variable explanations,
the action major-category block, and per-role in-context examples. Agents
answer inside a fenced JSON block; surrounding prose is tolerated.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests

from . import catalog
from .catalog import Library
from .errors import BackendUnavailable, FixtureExhausted, MissingBlock, ParseError

logger = logging.getLogger(__name__)

ROLE_TAGS = (
    "director",
    "action",
    "motion",
    "decoration",
    "continuation",
    "segmenter",
    "visual_check",
    "textual_check",
)

CAPTION_PROMPT = "Please briefly describe this image in shorts, do not exceed 30 words"


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    role_tag: str

    def __post_init__(self):
        if self.role_tag not in ROLE_TAGS:
            raise ValueError(f"unknown role tag {self.role_tag!r}")
        if not self.user_text:
            raise ValueError("user_text must be non-empty")


@dataclass(frozen=True)
class RawResponse:
    text: str
    backend_id: str
    latency_ms: int = 0


@dataclass(frozen=True)
class LibraryDocs:
    """The per-library text blocks fed into prompts."""

    intro: str
    functions: str
    variables: str
    majors: str | None = None  # action library only


@dataclass
class PromptContext:
    """Everything build_prompt needs besides the fragment itself."""

    action: LibraryDocs
    motion: LibraryDocs
    decoration: LibraryDocs
    examples: dict[str, str] = field(default_factory=dict)

    @classmethod
    def default(cls, examples: dict[str, str] | None = None) -> "PromptContext":
        from .prompts import DEFAULT_EXAMPLES

        merged = dict(DEFAULT_EXAMPLES)
        if examples:
            merged.update(examples)
        return cls(
            action=LibraryDocs(
                intro=catalog.intro_text(Library.ACTION),
                functions=catalog.functions_text(Library.ACTION),
                variables=catalog.variables_text(Library.ACTION),
                majors=catalog.majors_text(),
            ),
            motion=LibraryDocs(
                intro=catalog.intro_text(Library.MOTION),
                functions=catalog.functions_text(Library.MOTION),
                variables=catalog.variables_text(Library.MOTION),
            ),
            decoration=LibraryDocs(
                intro=catalog.intro_text(Library.DECORATION),
                functions=catalog.functions_text(Library.DECORATION),
                variables=catalog.variables_text(Library.DECORATION),
            ),
            examples=merged,
        )


def _require(value: str | None, role: str, block: str) -> str:
    if not value:
        raise MissingBlock(f"role {role!r} requires context block {block!r}")
    return value


def build_prompt(role: str, context: PromptContext, fragment: str,
                 extra: str = "") -> PromptBundle:
    """Assemble the system/user texts for a role from the template store.

    Pure given the template store: identical inputs produce identical
    bundles. Raises MissingBlock when a role-required block is absent.
    """
    from . import prompts

    if role not in ROLE_TAGS:
        raise ValueError(f"unknown role tag {role!r}")
    if not fragment:
        raise ValueError("fragment must be non-empty")

    if role == "director":
        system = prompts.DIRECTOR_TEMPLATE.format(
            action_intro=_require(context.action.intro, role, "L_action"),
            motion_intro=_require(context.motion.intro, role, "L_motion"),
            decoration_intro=_require(context.decoration.intro, role,
                                      "L_decoration"),
            examples=context.examples.get("director", ""),
        )
    elif role == "action":
        system = prompts.ACTION_TEMPLATE.format(
            intro=_require(context.action.intro, role, "L_action"),
            majors=_require(context.action.majors, role, "C_action"),
            functions=_require(context.action.functions, role, "F_action"),
            variables=_require(context.action.variables, role, "V_action"),
            examples=_require(context.examples.get("action"), role, "I_action"),
        )
    elif role in ("motion", "decoration"):
        docs: LibraryDocs = getattr(context, role)
        system = prompts.DISPATCH_TEMPLATE.format(
            role=role,
            subject="motions for humanoid characters" if role == "motion"
            else "decorative elements",
            intro=_require(docs.intro, role, f"L_{role}"),
            functions=_require(docs.functions, role, f"F_{role}"),
            variables=_require(docs.variables, role, f"V_{role}"),
            examples=_require(context.examples.get(role), role, f"I_{role}"),
            format_block=prompts.MOTION_FORMAT if role == "motion"
            else prompts.DECORATION_FORMAT,
        )
    elif role == "continuation":
        system = prompts.CONTINUATION_TEMPLATE.format(
            action_intro=_require(context.action.intro, role, "L_action"),
            motion_intro=_require(context.motion.intro, role, "L_motion"),
            decoration_intro=_require(context.decoration.intro, role,
                                      "L_decoration"),
            examples=_require(context.examples.get("continuation"), role,
                              "I_continuation"),
        )
    elif role == "segmenter":
        system = prompts.SEGMENTER_TEMPLATE
    elif role == "textual_check":
        system = prompts.CHECKER_TEMPLATE
    else:  # visual_check
        system = CAPTION_PROMPT

    user = fragment
    if extra:
        user = f"{fragment}\n\nCorrections from review:\n{extra}"
    return PromptBundle(system_text=system, user_text=user, role_tag=role)


# --- structured response extraction ---------------------------------------

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\s*\n(.*?)```", re.DOTALL)


def extract_json_block(text: str) -> dict:
    """Pull the first fenced JSON object out of a response.

    Prose around the block is ignored. A bare JSON object with no fence is
    accepted as a courtesy. Raises ParseError when nothing parses.
    """
    for match in _FENCE.finditer(text):
        try:
            data = json.loads(match.group(1))
        except json.JSONDecodeError:
            continue
        if isinstance(data, dict):
            return data
    try:
        data = json.loads(text.strip())
        if isinstance(data, dict):
            return data
    except json.JSONDecodeError:
        pass
    raise ParseError("no parseable fenced JSON block in response", text)


# --- backends --------------------------------------------------------------


class ScriptedBackend:
    """Deterministic fixture replay, sequenced per role tag.

    File layout: a directory of UTF-8 files named ``<role>_<seq>.txt``.
    Consumption is serialized per role so concurrent window workers cannot
    reorder a role's sequence.
    """

    def __init__(self, responses: dict[str, list[str]]):
        self._responses = {role: list(items) for role, items in responses.items()}
        self._cursor = {role: 0 for role in self._responses}
        self._lock = threading.Lock()

    @classmethod
    def from_dir(cls, fixtures_dir: str | Path) -> "ScriptedBackend":
        fixtures_dir = Path(fixtures_dir)
        pattern = re.compile(r"^([a-z_]+)_(\d+)\.txt$")
        sequences: dict[str, list[tuple[int, str]]] = {}
        for path in sorted(fixtures_dir.iterdir()):
            match = pattern.match(path.name)
            if not match:
                continue
            role, seq = match.group(1), int(match.group(2))
            sequences.setdefault(role, []).append(
                (seq, path.read_text(encoding="utf-8")))
        responses = {
            role: [text for _, text in sorted(items)]
            for role, items in sequences.items()
        }
        return cls(responses)

    def complete(self, prompt: PromptBundle) -> RawResponse:
        with self._lock:
            role = prompt.role_tag
            items = self._responses.get(role, [])
            index = self._cursor.get(role, 0)
            if index >= len(items):
                raise FixtureExhausted(role, index)
            self._cursor[role] = index + 1
        return RawResponse(text=items[index], backend_id="scripted")

    def reset(self) -> None:
        with self._lock:
            self._cursor = {role: 0 for role in self._responses}


class HttpBackend:
    """OpenAI-compatible chat-completions client with retry/backoff.

    Configuration comes from arguments or the SCENEWEAVE_BASE_URL,
    SCENEWEAVE_MODEL and SCENEWEAVE_API_KEY environment variables.
    """

    def __init__(self, base_url: str | None = None, model: str | None = None,
                 api_key: str | None = None, temperature: float = 0.0,
                 timeout: float = 60.0, max_retries: int = 3,
                 backoff_base: float = 1.0, session=None):
        self.base_url = (base_url or os.environ.get("SCENEWEAVE_BASE_URL", "")
                         ).rstrip("/")
        self.model = model or os.environ.get("SCENEWEAVE_MODEL", "")
        self.api_key = api_key or os.environ.get("SCENEWEAVE_API_KEY", "")
        self.temperature = temperature
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.session = session or requests.Session()
        if not self.base_url:
            raise BackendUnavailable("no base URL configured for http backend")

    def complete(self, prompt: PromptBundle) -> RawResponse:
        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [
                {"role": "system", "content": prompt.system_text},
                {"role": "user", "content": prompt.user_text},
            ],
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        url = f"{self.base_url}/chat/completions"

        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            started = time.monotonic()
            try:
                response = self.session.post(url, json=payload, headers=headers,
                                             timeout=self.timeout)
                response.raise_for_status()
                body = response.json()
                text = body["choices"][0]["message"]["content"]
                latency = int((time.monotonic() - started) * 1000)
                return RawResponse(text=text, backend_id=self.model or "http",
                                   latency_ms=latency)
            except Exception as exc:
                last_error = exc
                delay = self.backoff_base * (2 ** attempt)
                logger.warning("chat request failed (attempt %d/%d): %s",
                               attempt + 1, self.max_retries, exc)
                if attempt + 1 < self.max_retries:
                    time.sleep(delay)
        raise BackendUnavailable(
            f"chat endpoint failed after {self.max_retries} attempts: "
            f"{last_error}")
