"""Typed schemas for the three pre-defined function libraries.

The action library is hierarchical (seven major categories, each holding
sub-actions); the motion and decoration libraries are flat. Catalogs are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .story import EntityKind, EntityRegistry


class Library(str, enum.Enum):
    ACTION = "action"
    MOTION = "motion"
    DECORATION = "decoration"


ACTION_MAJOR_CATEGORIES = (
    "special action",
    "straight line movement",
    "curved movement",
    "jumping motion",
    "impact motion",
    "state recovery action",
    "demonstration action",
)

MAJOR_CATEGORY_DOCS = {
    "special action": "placeholder behaviours with no scene change",
    "straight line movement": "move the character along a straight line",
    "curved movement": "move the character along a curve",
    "jumping motion": "make the character perform a jump",
    "impact motion": "move the character after being collided",
    "state recovery action": "return the character to its original state",
    "demonstration action": "let the character demonstrate its status and appearance",
}


@dataclass(frozen=True)
class ParamSpec:
    name: str
    semantic_type: str  # vec3 | vec3_list | float | int | str
    required: bool = False
    doc: str = ""


@dataclass(frozen=True)
class FunctionSpec:
    library: Library
    name: str
    doc: str
    params: tuple[ParamSpec, ...] = ()
    major_category: str | None = None  # action library only
    needs_target: bool = True  # False means the call must not carry a target
    humanoid_only: bool = False

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None


def _vec3(name: str, doc: str, required: bool = False) -> ParamSpec:
    return ParamSpec(name, "vec3", required, doc)


_ACTION_SPECS = (
    FunctionSpec(
        Library.ACTION, "do nothing",
        "the character stays in place and does nothing",
        major_category="special action",
    ),
    FunctionSpec(
        Library.ACTION, "constant speed movement",
        "the character moves through a straight line at constant speed",
        params=(_vec3("destination", "end point of the move"),),
        major_category="straight line movement",
    ),
    FunctionSpec(
        Library.ACTION, "variable speed movement",
        "the character moves through a straight line at variable speed "
        "(slow start and stop)",
        params=(_vec3("destination", "end point of the move"),),
        major_category="straight line movement",
    ),
    FunctionSpec(
        Library.ACTION, "bezier curve movement",
        "curved movement with one control point; the bend is intense",
        params=(
            _vec3("destination", "end point of the move"),
            _vec3("control", "single control point shaping the bend"),
        ),
        major_category="curved movement",
    ),
    FunctionSpec(
        Library.ACTION, "S-curve movement",
        "curved movement with two control points on alternating sides; "
        "the bend is moderate",
        params=(
            _vec3("destination", "end point of the move"),
            ParamSpec("controls", "vec3_list", False, "two control points"),
        ),
        major_category="curved movement",
    ),
    FunctionSpec(
        Library.ACTION, "B-curve movement",
        "curved movement with two exaggerated same-side control points; "
        "the bend looks strange",
        params=(
            _vec3("destination", "end point of the move"),
            ParamSpec("controls", "vec3_list", False, "two control points"),
        ),
        major_category="curved movement",
    ),
    FunctionSpec(
        Library.ACTION, "jump in place",
        "the character jumps in place; the position does not change",
        params=(
            ParamSpec("height", "float", False, "apex height in scene units"),
            ParamSpec("repeat", "int", False, "number of consecutive jumps"),
        ),
        major_category="jumping motion",
    ),
    FunctionSpec(
        Library.ACTION, "jump forward",
        "the character jumps forward to another position",
        params=(
            _vec3("destination", "landing point"),
            ParamSpec("height", "float", False, "apex height in scene units"),
        ),
        major_category="jumping motion",
    ),
    FunctionSpec(
        Library.ACTION, "fall down",
        "the character falls to the ground where it stands",
        major_category="impact motion",
    ),
    FunctionSpec(
        Library.ACTION, "knocked down",
        "the character is heavily knocked to the ground with a short slide",
        params=(_vec3("direction", "normalized knock direction"),),
        major_category="impact motion",
    ),
    FunctionSpec(
        Library.ACTION, "knocked away",
        "the character is very intensely knocked into the air along a "
        "ballistic arc",
        params=(_vec3("direction", "normalized knock direction"),),
        major_category="impact motion",
    ),
    FunctionSpec(
        Library.ACTION, "stand up",
        "the character changes from fallen to standing",
        major_category="state recovery action",
    ),
    FunctionSpec(
        Library.ACTION, "landing from the sky",
        "the character descends from the air to the ground",
        major_category="state recovery action",
    ),
    FunctionSpec(
        Library.ACTION, "rotate in place",
        "the character continuously rotates left and right in place",
        major_category="demonstration action",
    ),
    FunctionSpec(
        Library.ACTION, "drifting",
        "the character drives a closed drift circle to show winning",
        major_category="demonstration action",
    ),
)

_MOTION_SPECS = (
    FunctionSpec(
        Library.MOTION, "special motion",
        "the humanoid stays in place and does nothing",
        humanoid_only=True,
    ),
    FunctionSpec(
        Library.MOTION, "trajectory-based motion",
        "the humanoid moves along the given trajectory",
        params=(ParamSpec("trajectory", "vec3_list", True,
                          "waypoints the humanoid follows"),),
        humanoid_only=True,
    ),
    FunctionSpec(
        Library.MOTION, "human-object interaction",
        "the humanoid controls one object from one place to another",
        params=(ParamSpec("object", "str", True, "name of the handled object"),),
        humanoid_only=True,
    ),
    FunctionSpec(
        Library.MOTION, "human-scene interaction",
        "the humanoid walks only inside the given square region",
        params=(
            _vec3("center", "square center"),
            ParamSpec("size", "float", False, "square edge length"),
        ),
        humanoid_only=True,
    ),
    FunctionSpec(
        Library.MOTION, "physics-based motion",
        "the humanoid stands on one foot and keeps balanced",
        humanoid_only=True,
    ),
)

_DECORATION_SPECS = (
    FunctionSpec(
        Library.DECORATION, "switching camera perspective",
        "switch to a new camera perspective focused on the target character",
    ),
    FunctionSpec(
        Library.DECORATION, "light illumination",
        "a light shines on the target character",
    ),
    FunctionSpec(
        Library.DECORATION, "particle floc",
        "ribbon-like particle floc decorates the target character",
    ),
    FunctionSpec(
        Library.DECORATION, "beaming material",
        "the target character emits colored light",
        params=(ParamSpec("color", "str", False, "emission color name"),),
    ),
    FunctionSpec(
        Library.DECORATION, "fireworks",
        "fireworks on the ground for celebration",
        params=(ParamSpec("count", "int", False, "number of bursts"),),
        needs_target=False,
    ),
    FunctionSpec(
        Library.DECORATION, "sun light adjustment",
        "sun rays dim or the environment light dims",
        params=(ParamSpec("intensity", "float", False,
                          "target light level, 0..1"),),
        needs_target=False,
    ),
    FunctionSpec(
        Library.DECORATION, "camera ring shot",
        "the camera takes a full 360-degree shot around the target object",
    ),
)

_ALL_SPECS = _ACTION_SPECS + _MOTION_SPECS + _DECORATION_SPECS
_BY_NAME = {spec.name: spec for spec in _ALL_SPECS}

# Sub-action names per major category, for the hierarchy constraint.
SUBS_BY_MAJOR: dict[str, tuple[str, ...]] = {
    major: tuple(s.name for s in _ACTION_SPECS if s.major_category == major)
    for major in ACTION_MAJOR_CATEGORIES
}

RING_SHOT_SWEEP = 2.0 * math.pi


def library_catalog(library: Library | str) -> list[FunctionSpec]:
    library = Library(library)
    return [spec for spec in _ALL_SPECS if spec.library is library]


def lookup(name: str) -> FunctionSpec | None:
    return _BY_NAME.get(name)


def hierarchy_pair_valid(major: str, sub: str) -> bool:
    return sub in SUBS_BY_MAJOR.get(major, ())


@dataclass(frozen=True)
class FunctionCall:
    """A typed invocation of a library function against a scene entity."""

    spec_name: str
    target: str | None = None
    args: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(float(value))


def _is_vec3(value) -> bool:
    return (
        isinstance(value, (list, tuple))
        and len(value) == 3
        and all(_is_number(v) for v in value)
    )


def _arg_type_ok(semantic_type: str, value) -> bool:
    if semantic_type == "vec3":
        return _is_vec3(value)
    if semantic_type == "vec3_list":
        return (isinstance(value, (list, tuple)) and len(value) >= 1
                and all(_is_vec3(v) for v in value))
    if semantic_type == "float":
        return _is_number(value)
    if semantic_type == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if semantic_type == "str":
        return isinstance(value, str) and bool(value.strip())
    return False


def validate_call(call: FunctionCall, registry: EntityRegistry) -> ValidationResult:
    """Schema-check a call: spec exists, target compatible, args bound and typed.

    Returns violations instead of raising, so agents can route the text
    into the self-check loop.
    """
    violations: list[str] = []
    spec = lookup(call.spec_name)
    if spec is None:
        return ValidationResult(False, (f"unknown function {call.spec_name!r}",))

    if spec.needs_target:
        if not call.target:
            violations.append(f"{spec.name!r} requires a target entity")
        else:
            entity = registry.get(call.target)
            if entity is None:
                violations.append(f"unknown entity {call.target!r}")
            elif spec.humanoid_only and entity.kind is not EntityKind.HUMANOID:
                violations.append(
                    f"motion target must be humanoid, {call.target!r} is "
                    f"{entity.kind.value}")
    elif call.target:
        violations.append(f"{spec.name!r} takes no target")

    for param in spec.params:
        if param.required and param.name not in call.args:
            violations.append(f"missing required argument {param.name!r}")
    for arg_name, value in call.args.items():
        param = spec.param(arg_name)
        if param is None:
            violations.append(f"unknown argument {arg_name!r} for {spec.name!r}")
        elif not _arg_type_ok(param.semantic_type, value):
            violations.append(
                f"argument {arg_name!r} must be {param.semantic_type}")

    return ValidationResult(not violations, tuple(violations))


# --- text blocks for prompt construction and docs -------------------------

_LIBRARY_INTROS = {
    Library.ACTION: (
        "Action library: controls actions for non-humanoid characters and "
        "reference objects. It is organized hierarchically: seven major "
        "action categories, each holding one or several sub-actions."
    ),
    Library.MOTION: (
        "Motion library: controls full-body motions for humanoid characters "
        "only. Selected motions are handed to an external motion synthesizer "
        "as directives."
    ),
    Library.DECORATION: (
        "Decoration library: schedules decorative scene elements such as "
        "camera work, lighting and particles to make the story vivid."
    ),
}


def intro_text(library: Library | str) -> str:
    return _LIBRARY_INTROS[Library(library)]


def functions_text(library: Library | str) -> str:
    lines = []
    for spec in library_catalog(library):
        prefix = f"[{spec.major_category}] " if spec.major_category else ""
        lines.append(f"- {prefix}{spec.name}: {spec.doc}")
    return "\n".join(lines)


def variables_text(library: Library | str) -> str:
    lines = []
    for spec in library_catalog(library):
        if spec.needs_target:
            lines.append(f"- {spec.name}: target = entity name"
                         + (" (humanoid only)" if spec.humanoid_only else ""))
        else:
            lines.append(f"- {spec.name}: no target")
        for param in spec.params:
            flag = "required" if param.required else "optional"
            lines.append(
                f"    {param.name} ({param.semantic_type}, {flag}): {param.doc}")
    return "\n".join(lines)


def majors_text() -> str:
    lines = []
    for major in ACTION_MAJOR_CATEGORIES:
        subs = ", ".join(SUBS_BY_MAJOR[major])
        lines.append(f"- {major}: {MAJOR_CATEGORY_DOCS[major]} "
                     f"(sub-actions: {subs})")
    return "\n".join(lines)


def catalog_document() -> str:
    """Full schema dump as a structured text document."""
    parts = []
    for library in Library:
        parts.append(f"== {library.value} library ==")
        parts.append(intro_text(library))
        if library is Library.ACTION:
            parts.append("major categories:")
            parts.append(majors_text())
        parts.append("functions:")
        parts.append(functions_text(library))
        parts.append("variables:")
        parts.append(variables_text(library))
        parts.append("")
    return "\n".join(parts)
