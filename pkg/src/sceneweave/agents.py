"""The four decision agents and the per-window planner.

The director picks libraries and a duration class; the action agent
dispatches hierarchically (major category, then sub-action); the motion
and decoration agents dispatch flat function calls. Each agent's output
runs through the textual self-check loop before it lands in the plan.
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field

from . import catalog
from .catalog import FunctionCall, validate_call
from .checks import CheckVerdict, TextualChecker, check_loop
from .errors import (
    AgentOutputError,
    CheckBudgetExhausted,
    HierarchyViolation,
    InvalidCall,
    ParseError,
    PlanFailure,
)
from .gateway import PromptContext, build_prompt, extract_json_block
from .story import EntityKind, EntityRegistry, EventWindow

logger = logging.getLogger(__name__)


class DurationClass(str, enum.Enum):
    FAST = "fast"
    MODERATE = "moderate"
    SLOW = "slow"
    EMPHASIS = "emphasis"


@dataclass(frozen=True)
class DirectorDecision:
    use_action: bool
    use_motion: bool
    use_decoration: bool
    duration: DurationClass
    # True when an all-false answer was coerced to an idle action window.
    coerced_idle: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class ActionAssignment:
    entity: str
    major_category: str
    sub_action: str
    args: dict = field(default_factory=dict)

    def to_call(self) -> FunctionCall:
        return FunctionCall(spec_name=self.sub_action, target=self.entity,
                            args=dict(self.args))


@dataclass(frozen=True)
class MotionAssignment:
    call: FunctionCall


@dataclass(frozen=True)
class DecorationAssignment:
    call: FunctionCall


@dataclass
class WindowPlan:
    window: EventWindow
    decision: DirectorDecision
    actions: list[ActionAssignment] = field(default_factory=list)
    motions: list[MotionAssignment] = field(default_factory=list)
    decorations: list[DecorationAssignment] = field(default_factory=list)
    check_trace: list[CheckVerdict] = field(default_factory=list)


# --- parsing ---------------------------------------------------------------

_TRUTHY = {"true": True, "false": False}


def _parse_flag(data: dict, key: str, raw: str) -> bool:
    if key not in data:
        raise ParseError(f"missing required key {key!r}", raw)
    value = data[key]
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in _TRUTHY:
        return _TRUTHY[value.strip().lower()]
    raise ParseError(f"key {key!r} must be true or false", raw)


def parse_director_response(text: str) -> DirectorDecision:
    data = extract_json_block(text)
    use_action = _parse_flag(data, "use_action", text)
    use_motion = _parse_flag(data, "use_motion", text)
    use_decoration = _parse_flag(data, "use_decoration", text)
    if "duration" not in data:
        raise ParseError("missing required key 'duration'", text)
    raw_duration = str(data["duration"]).strip().lower()
    try:
        duration = DurationClass(raw_duration)
    except ValueError:
        raise ParseError(
            f"duration {raw_duration!r} is not one of fast/moderate/slow/"
            "emphasis", text) from None
    return DirectorDecision(use_action, use_motion, use_decoration, duration)


def _assignment_records(text: str) -> list[dict]:
    data = extract_json_block(text)
    records = data.get("assignments")
    if not isinstance(records, list):
        raise ParseError("missing required key 'assignments'", text)
    for record in records:
        if not isinstance(record, dict):
            raise ParseError("each assignment must be an object", text)
    return records


def parse_action_response(text: str, registry: EntityRegistry) -> list[ActionAssignment]:
    """Two-phase parse: major category first, then the sub-action under it."""
    assignments = []
    for record in _assignment_records(text):
        entity = record.get("entity")
        if not isinstance(entity, str) or not entity.strip():
            raise ParseError("assignment missing 'entity'", text)
        major = record.get("major_category")
        if not isinstance(major, str) or major not in catalog.SUBS_BY_MAJOR:
            raise HierarchyViolation(
                f"unknown major action category {major!r}", text)
        sub = record.get("sub_action")
        if not isinstance(sub, str) or not catalog.hierarchy_pair_valid(major, sub):
            raise HierarchyViolation(
                f"sub-action {sub!r} does not belong to major category "
                f"{major!r}", text)
        args = record.get("args", {})
        if not isinstance(args, dict):
            raise ParseError("assignment 'args' must be an object", text)
        assignment = ActionAssignment(entity=entity, major_category=major,
                                      sub_action=sub, args=args)
        _validate_action_target(assignment, registry, text)
        assignments.append(assignment)
    return assignments


def _validate_action_target(assignment: ActionAssignment,
                            registry: EntityRegistry, raw: str) -> None:
    entity = registry.get(assignment.entity)
    if entity is None:
        raise InvalidCall([f"unknown entity {assignment.entity!r}"], raw)
    if entity.kind is EntityKind.HUMANOID:
        raise InvalidCall(
            [f"action target {assignment.entity!r} is humanoid; use the "
             "motion library"], raw)
    result = validate_call(assignment.to_call(), registry)
    if not result.ok:
        raise InvalidCall(list(result.violations), raw)


def parse_motion_response(text: str, registry: EntityRegistry) -> list[MotionAssignment]:
    assignments = []
    for record in _assignment_records(text):
        entity = record.get("entity")
        function = record.get("function")
        if not isinstance(entity, str) or not isinstance(function, str):
            raise ParseError("motion assignment needs 'entity' and 'function'",
                             text)
        args = record.get("args", {})
        if not isinstance(args, dict):
            raise ParseError("assignment 'args' must be an object", text)
        call = FunctionCall(spec_name=function, target=entity, args=args)
        result = validate_call(call, registry)
        if not result.ok:
            raise InvalidCall(list(result.violations), text)
        spec = catalog.lookup(function)
        if spec.library is not catalog.Library.MOTION:
            raise InvalidCall([f"{function!r} is not a motion function"], text)
        assignments.append(MotionAssignment(call))
    return assignments


def parse_decoration_response(text: str, registry: EntityRegistry) -> list[DecorationAssignment]:
    assignments = []
    for record in _assignment_records(text):
        function = record.get("function")
        if not isinstance(function, str):
            raise ParseError("decoration assignment needs 'function'", text)
        target = record.get("target")
        if target is not None and not isinstance(target, str):
            raise ParseError("decoration 'target' must be a string or null",
                             text)
        args = record.get("args", {})
        if not isinstance(args, dict):
            raise ParseError("assignment 'args' must be an object", text)
        call = FunctionCall(spec_name=function, target=target, args=args)
        result = validate_call(call, registry)
        if not result.ok:
            raise InvalidCall(list(result.violations), text)
        spec = catalog.lookup(function)
        if spec.library is not catalog.Library.DECORATION:
            raise InvalidCall([f"{function!r} is not a decoration function"],
                              text)
        assignments.append(DecorationAssignment(call))
    return assignments


# --- agent runners ----------------------------------------------------------


def run_director(window: EventWindow, backend, context: PromptContext,
                 extra: str = "") -> DirectorDecision:
    bundle = build_prompt("director", context, window.text, extra)
    response = backend.complete(bundle)
    decision = parse_director_response(response.text)
    if not (decision.use_action or decision.use_motion or decision.use_decoration):
        logger.warning("window %d: director dispatched no library; coercing "
                       "an idle action window", window.index)
        decision = DirectorDecision(True, False, False, decision.duration,
                                    coerced_idle=True)
    return decision


def _idle_assignments(window: EventWindow,
                      registry: EntityRegistry) -> list[ActionAssignment]:
    out = []
    for name in window.entities_mentioned:
        entity = registry.get(name)
        if entity is not None and entity.kind is not EntityKind.HUMANOID:
            out.append(ActionAssignment(entity=entity.name,
                                        major_category="special action",
                                        sub_action="do nothing"))
    return out


def run_action_agent(window: EventWindow, backend, context: PromptContext,
                     registry: EntityRegistry, extra: str = "") -> list[ActionAssignment]:
    bundle = build_prompt("action", context, window.text, extra)
    response = backend.complete(bundle)
    assignments = parse_action_response(response.text, registry)
    assigned = {a.entity.casefold() for a in assignments}
    for idle in _idle_assignments(window, registry):
        if idle.entity.casefold() not in assigned:
            assignments.append(idle)
    return assignments


def run_motion_agent(window: EventWindow, backend, context: PromptContext,
                     registry: EntityRegistry, extra: str = "") -> list[MotionAssignment]:
    bundle = build_prompt("motion", context, window.text, extra)
    response = backend.complete(bundle)
    return parse_motion_response(response.text, registry)


def run_decoration_agent(window: EventWindow, backend, context: PromptContext,
                         registry: EntityRegistry, extra: str = "") -> list[DecorationAssignment]:
    bundle = build_prompt("decoration", context, window.text, extra)
    response = backend.complete(bundle)
    return parse_decoration_response(response.text, registry)


# --- audit serialization ----------------------------------------------------


def decision_record(decision: DirectorDecision) -> dict:
    return {
        "use_action": decision.use_action,
        "use_motion": decision.use_motion,
        "use_decoration": decision.use_decoration,
        "duration": decision.duration.value,
    }


def call_record(call: FunctionCall) -> dict:
    return {"function": call.spec_name, "target": call.target,
            "args": dict(call.args)}


def action_record(assignment: ActionAssignment) -> dict:
    return {
        "entity": assignment.entity,
        "major_category": assignment.major_category,
        "sub_action": assignment.sub_action,
        "args": dict(assignment.args),
    }


def plan_record(plan: WindowPlan) -> dict:
    return {
        "window": {
            "index": plan.window.index,
            "text": plan.window.text,
            "entities_mentioned": list(plan.window.entities_mentioned),
        },
        "decision": decision_record(plan.decision),
        "actions": [action_record(a) for a in plan.actions],
        "motions": [call_record(m.call) for m in plan.motions],
        "decorations": [call_record(d.call) for d in plan.decorations],
        "check_trace": [v.record() for v in plan.check_trace],
    }


def _serialize_output(output) -> str:
    if isinstance(output, DirectorDecision):
        return json.dumps(decision_record(output), sort_keys=True)
    if isinstance(output, list):
        rows = []
        for item in output:
            if isinstance(item, ActionAssignment):
                rows.append(action_record(item))
            else:
                rows.append(call_record(item.call))
        return json.dumps(rows, sort_keys=True)
    return json.dumps(str(output))


# --- planner ----------------------------------------------------------------


class Planner:
    """Plans windows: director, flagged agents, self-check loop around each.

    With ``checker=None`` the self-check loop is disabled: each agent's
    first parseable output stands, and agent errors fail the plan
    immediately. ``guidance`` (e.g. human visual feedback on a re-run) is
    appended to every agent prompt.
    """

    def __init__(self, backend, registry: EntityRegistry,
                 context: PromptContext | None = None,
                 checker: TextualChecker | None = None,
                 max_iters: int = 3, guidance: str = ""):
        if max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        self.backend = backend
        self.registry = registry
        self.context = context or PromptContext.default()
        self.checker = checker
        self.max_iters = max_iters
        self.guidance = guidance

    def _run_checked(self, subject: str, window: EventWindow, produce):
        if self.guidance:
            inner = produce
            guidance = self.guidance

            def produce(extra):  # noqa: F811 - deliberate wrap
                merged = f"{guidance}\n{extra}" if extra else guidance
                return inner(merged)

        if self.checker is None:
            try:
                return produce(""), []
            except AgentOutputError as exc:
                raise PlanFailure(window.index, subject, exc) from exc
        try:
            return check_loop(produce, window.text, self.checker, subject,
                              self.max_iters, serialize=_serialize_output)
        except CheckBudgetExhausted as exc:
            raise PlanFailure(window.index, subject, exc) from exc

    def plan_window(self, window: EventWindow) -> WindowPlan:
        trace: list[CheckVerdict] = []

        decision, verdicts = self._run_checked(
            "director", window,
            lambda extra: run_director(window, self.backend, self.context,
                                       extra))
        trace.extend(verdicts)

        actions: list[ActionAssignment] = []
        motions: list[MotionAssignment] = []
        decorations: list[DecorationAssignment] = []

        if decision.coerced_idle:
            actions = _idle_assignments(window, self.registry)
        elif decision.use_action:
            actions, verdicts = self._run_checked(
                "action", window,
                lambda extra: run_action_agent(window, self.backend,
                                               self.context, self.registry,
                                               extra))
            trace.extend(verdicts)

        if decision.use_motion:
            motions, verdicts = self._run_checked(
                "motion", window,
                lambda extra: run_motion_agent(window, self.backend,
                                               self.context, self.registry,
                                               extra))
            trace.extend(verdicts)

        if decision.use_decoration:
            decorations, verdicts = self._run_checked(
                "decoration", window,
                lambda extra: run_decoration_agent(window, self.backend,
                                                   self.context, self.registry,
                                                   extra))
            trace.extend(verdicts)

        return WindowPlan(window=window, decision=decision, actions=actions,
                          motions=motions, decorations=decorations,
                          check_trace=trace)

    def plan_story(self, windows: list[EventWindow]) -> list[WindowPlan]:
        return [self.plan_window(window) for window in windows]


def serialize_for_review(output) -> str:
    """Audit-format serialization used by the reflect step."""
    return _serialize_output(output)
