"""Exception hierarchy shared across the pipeline.

Agent-output problems (parse failures, hierarchy violations, invalid calls)
derive from :class:`AgentOutputError` so the textual self-check loop can
convert them into corrective feedback instead of aborting the run.
"""

from __future__ import annotations


class SceneWeaveError(Exception):
    """Base class for all package errors."""


class ManifestError(SceneWeaveError):
    """Story manifest is missing, malformed, or violates invariants."""


class SegmentationError(SceneWeaveError):
    """LLM segmenter returned malformed output and the fallback is disabled."""


# --- function library / generators ---------------------------------------


class DegenerateSpan(SceneWeaveError):
    """Frame span has start >= end."""


class ControlArityError(SceneWeaveError):
    """Curve generator received the wrong number of control points."""


class MissingTarget(SceneWeaveError):
    """Forward jump requested without a destination."""


class NonHumanoidTarget(SceneWeaveError):
    """Motion directive requested for an entity that is not humanoid."""


class UnsupportedEvent(SceneWeaveError):
    """Scene event kind has no script emitter."""


# --- backends -------------------------------------------------------------


class BackendUnavailable(SceneWeaveError):
    """HTTP backend failed after exhausting its retry budget."""


class FixtureExhausted(SceneWeaveError):
    """Scripted backend ran out of fixtures for a role."""

    def __init__(self, role: str, index: int):
        super().__init__(f"no fixture left for role {role!r} (next index {index})")
        self.role = role
        self.index = index


class MissingBlock(SceneWeaveError):
    """A context block required by the prompt template is absent."""


class CaptionerUnavailable(SceneWeaveError):
    """Visual captioner could not be reached; review is skipped."""


class EmbedderUnavailable(SceneWeaveError):
    """Embedding adapter not configured or failing; score left absent."""


# --- agent outputs --------------------------------------------------------


class AgentOutputError(SceneWeaveError):
    """An agent response that cannot be accepted as-is.

    ``feedback`` is the corrective text handed back to the agent on the
    next self-check iteration.
    """

    def __init__(self, feedback: str, raw_text: str = ""):
        super().__init__(feedback)
        self.feedback = feedback
        self.raw_text = raw_text


class ParseError(AgentOutputError):
    """Response lacked the required structured block or required keys."""


class HierarchyViolation(AgentOutputError):
    """Action pair (major category, sub-action) is not in the catalog."""


class InvalidCall(AgentOutputError):
    """A dispatched function call failed schema validation."""

    def __init__(self, violations: list[str], raw_text: str = ""):
        super().__init__("; ".join(violations), raw_text)
        self.violations = list(violations)


# --- pipeline -------------------------------------------------------------


class CheckBudgetExhausted(SceneWeaveError):
    """Self-check loop ran out of iterations without a passing verdict."""

    def __init__(self, output, trace):
        super().__init__(
            f"self-check budget exhausted after {len(trace)} iteration(s)"
        )
        self.output = output
        self.trace = trace


class PlanFailure(SceneWeaveError):
    """An agent still failed after the correction budget for a window."""

    def __init__(self, window_index: int, subject: str, cause: Exception):
        super().__init__(
            f"window {window_index}: {subject} agent failed after corrections: {cause}"
        )
        self.window_index = window_index
        self.subject = subject
        self.cause = cause


class CompileError(SceneWeaveError):
    """Timeline compilation failed for a window."""

    def __init__(self, window_index: int, cause: Exception):
        super().__init__(f"window {window_index}: {cause}")
        self.window_index = window_index
        self.cause = cause


# --- evaluation -----------------------------------------------------------


class EmptyInput(SceneWeaveError):
    """Metric received an empty token sequence."""


class NoVotes(SceneWeaveError):
    """Alignment aggregation received no votes."""


class LengthMismatch(SceneWeaveError):
    """Caption list and window list differ in length."""
