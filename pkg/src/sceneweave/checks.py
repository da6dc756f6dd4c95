"""Textual self-check loop and visual review gate.

The textual loop reflects on each agent output with a separate checker
role; failed verdicts turn into corrective feedback appended to the
producing agent's next prompt. The visual gate captions a rendered clip
and compares the caption to the fragment through an embedding adapter.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass

from .errors import (
    AgentOutputError,
    CaptionerUnavailable,
    CheckBudgetExhausted,
    ParseError,
)
from .gateway import PromptBundle, build_prompt, extract_json_block

logger = logging.getLogger(__name__)

GENERIC_FEEDBACK = "re-answer in required format"
DEFAULT_TAU_VIS = 0.6


@dataclass(frozen=True)
class CheckVerdict:
    passed: bool
    feedback: str
    subject: str
    iteration: int

    def __post_init__(self):
        if not self.passed and not self.feedback:
            raise ValueError("failed verdicts must carry feedback")
        if self.iteration < 1:
            raise ValueError("iteration is 1-based")

    def record(self) -> dict:
        return {
            "passed": self.passed,
            "feedback": self.feedback,
            "subject": self.subject,
            "iteration": self.iteration,
        }


class TextualChecker:
    """Separate checker role verdicting agent outputs."""

    def __init__(self, backend, context=None):
        self.backend = backend
        self.context = context

    def reflect(self, output_text: str, fragment: str, subject: str,
                iteration: int) -> CheckVerdict:
        from .gateway import PromptContext

        context = self.context or PromptContext.default()
        user = (f"{fragment}\n\nAgent output under review ({subject}):\n"
                f"{output_text}")
        bundle = build_prompt("textual_check", context, user)
        response = self.backend.complete(bundle)
        try:
            data = extract_json_block(response.text)
            verdict = str(data.get("verdict", "")).strip().lower()
            if verdict not in ("pass", "fail"):
                raise ParseError("checker verdict must be pass or fail",
                                 response.text)
        except ParseError:
            return CheckVerdict(False, GENERIC_FEEDBACK, subject, iteration)
        if verdict == "pass":
            return CheckVerdict(True, "", subject, iteration)
        feedback = str(data.get("feedback", "")).strip() or GENERIC_FEEDBACK
        return CheckVerdict(False, feedback, subject, iteration)


def check_loop(produce, fragment: str, checker: TextualChecker, subject: str,
               max_iters: int, serialize=str):
    """Reflect-then-correct loop around one producing agent.

    Re-invokes ``produce`` with all accumulated feedback joined as the
    extra prompt until the checker passes or the budget runs out. Output
    errors raised by ``produce`` count as failed iterations with the error
    text as feedback. Returns (output, trace); raises CheckBudgetExhausted
    carrying the last output and the full trace.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    feedback_parts: list[str] = []
    trace: list[CheckVerdict] = []
    last_output = None
    for iteration in range(1, max_iters + 1):
        extra = "\n".join(feedback_parts)
        try:
            output = produce(extra)
        except AgentOutputError as exc:
            verdict = CheckVerdict(False, exc.feedback or GENERIC_FEEDBACK,
                                   subject, iteration)
            trace.append(verdict)
            feedback_parts.append(verdict.feedback)
            continue
        last_output = output
        verdict = checker.reflect(serialize(output), fragment, subject,
                                  iteration)
        trace.append(verdict)
        if verdict.passed:
            return output, trace
        feedback_parts.append(verdict.feedback)
    raise CheckBudgetExhausted(last_output, trace)


# --- visual review ----------------------------------------------------------


@dataclass(frozen=True)
class VisualReview:
    caption: str
    aligned: bool
    similarity: float
    guidance: str = ""

    def record(self) -> dict:
        return {
            "caption": self.caption,
            "aligned": self.aligned,
            "similarity": round(self.similarity, 6),
            "guidance": self.guidance,
        }


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics."""
    tokens, current = [], []
    for ch in text.lower():
        if ch.isalnum():
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


class BagOfWordsEmbedder:
    """Deterministic hashed bag-of-words embedder (test/CI stand-in).

    Token index comes from a stable md5 hash, so vectors are identical
    across processes and platforms.
    """

    def __init__(self, dim: int = 4096):
        self.dim = dim

    def _index(self, token: str) -> int:
        digest = hashlib.md5(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:4], "big") % self.dim

    def embed(self, text: str) -> list[float]:
        vector = [0.0] * self.dim
        for token in tokenize(text):
            vector[self._index(token)] += 1.0
        return vector


def cosine(u: list[float], v: list[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def mapped_similarity(a: str, b: str, embedder) -> float:
    """Cosine similarity mapped to [0, 1] via (1 + cos) / 2."""
    return (1.0 + cosine(embedder.embed(a), embedder.embed(b))) / 2.0


def visual_review(image_ref: str, fragment: str, captioner, embedder,
                  tau_vis: float = DEFAULT_TAU_VIS) -> VisualReview:
    """Caption a rendered clip and compare it to its fragment.

    The caption request always uses the fixed short-description prompt.
    Raises CaptionerUnavailable when no caption can be obtained; callers
    mark the run unreviewed instead of failing it.
    """
    if captioner is None:
        raise CaptionerUnavailable("no captioner configured")
    bundle = PromptBundle(
        system_text=_caption_prompt(),
        user_text=image_ref or "(no image reference)",
        role_tag="visual_check",
    )
    try:
        response = captioner.complete(bundle)
    except Exception as exc:
        raise CaptionerUnavailable(str(exc)) from exc
    caption = response.text.strip()
    if not caption:
        raise CaptionerUnavailable("captioner returned empty text")
    similarity = mapped_similarity(caption, fragment, embedder)
    aligned = similarity >= tau_vis
    guidance = ""
    if not aligned:
        guidance = (
            f"The rendered clip reads as: {caption!r}. It should depict: "
            f"{fragment!r}. Adjust the dispatched functions so the clip "
            "matches the fragment.")
    return VisualReview(caption=caption, aligned=aligned,
                        similarity=similarity, guidance=guidance)


def _caption_prompt() -> str:
    from .gateway import CAPTION_PROMPT

    return CAPTION_PROMPT
