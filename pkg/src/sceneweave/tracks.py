"""Keyframe track, motion directive and scene event generators.

All generators are pure and sample densely: one keyframe per frame over
the inclusive span [start, end], so tracks are self-contained and do not
depend on renderer easing. First and last keys always land exactly on the
span endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .catalog import RING_SHOT_SWEEP, FunctionCall, lookup
from .errors import (
    ControlArityError,
    DegenerateSpan,
    MissingTarget,
    NonHumanoidTarget,
)
from .story import EntityKind, EntityRegistry

Vec3 = tuple[float, float, float]

# Geometry defaults; the narrative never pins these, so they are fixed
# constants to keep golden outputs stable.
KNOCKED_DOWN_DISTANCE = 1.0
KNOCKED_AWAY_DISTANCE = 3.0
KNOCKED_AWAY_APEX = 1.5
SKY_HEIGHT = 5.0
ROTATE_AMPLITUDE = math.pi / 6
ROTATE_CYCLES = 2
DRIFT_RADIUS = 1.5
CLOSURE_EPSILON = 1e-3

IDENTITY_SCALE: Vec3 = (1.0, 1.0, 1.0)
ZERO_ROTATION: Vec3 = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Keyframe:
    frame: int
    position: Vec3
    rotation_euler: Vec3 = ZERO_ROTATION
    scale: Vec3 = IDENTITY_SCALE


@dataclass(frozen=True)
class KeyframeTrack:
    entity: str
    keys: tuple[Keyframe, ...]

    def __post_init__(self):
        frames = [k.frame for k in self.keys]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError(f"track for {self.entity!r}: frames not "
                             "strictly increasing")

    @property
    def start_frame(self) -> int:
        return self.keys[0].frame

    @property
    def end_frame(self) -> int:
        return self.keys[-1].frame


@dataclass(frozen=True)
class MotionDirective:
    """Declarative hand-off to an external humanoid motion synthesizer."""

    entity: str
    motion_category: str
    frame_span: tuple[int, int]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        start, end = self.frame_span
        if start >= end:
            raise DegenerateSpan(f"directive span {self.frame_span}")


@dataclass(frozen=True)
class SceneEvent:
    kind: str
    frame_span: tuple[int, int]
    target: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        start, end = self.frame_span
        if start >= end:
            raise DegenerateSpan(f"event span {self.frame_span}")


def _check_span(frames: tuple[int, int]) -> tuple[int, int, int]:
    start, end = frames
    if start >= end:
        raise DegenerateSpan(f"frame span ({start}, {end})")
    return start, end, end - start + 1


def _build(entity: str, start: int, positions, rotations, scale=IDENTITY_SCALE) -> KeyframeTrack:
    keys = tuple(
        Keyframe(start + i, tuple(pos), tuple(rot), scale)
        for i, (pos, rot) in enumerate(zip(positions, rotations))
    )
    return KeyframeTrack(entity, keys)


def _const(value, n: int) -> list:
    return [value] * n


def gen_hold_track(entity: str, p: Vec3, frames: tuple[int, int],
                   rotation: Vec3 = ZERO_ROTATION) -> KeyframeTrack:
    """Two-key hold: the entity keeps its pose over the span."""
    start, end, _ = _check_span(frames)
    keys = (
        Keyframe(start, tuple(p), tuple(rotation)),
        Keyframe(end, tuple(p), tuple(rotation)),
    )
    return KeyframeTrack(entity, keys)


def gen_linear_track(entity: str, p0: Vec3, p1: Vec3, frames: tuple[int, int],
                     profile: str = "constant",
                     rotation: Vec3 = ZERO_ROTATION) -> KeyframeTrack:
    """Straight-line move; eased profile applies smoothstep 3t^2-2t^3."""
    start, _, n = _check_span(frames)
    if profile not in ("constant", "ease_in_out"):
        raise ValueError(f"unknown profile {profile!r}")
    positions = kernels.sample_linear(tuple(p0), tuple(p1), n,
                                      profile == "ease_in_out")
    return _build(entity, start, positions, _const(rotation, n))


def gen_curve_track(entity: str, kind: str, p0: Vec3, p1: Vec3,
                    controls: list[Vec3], frames: tuple[int, int],
                    rotation: Vec3 = ZERO_ROTATION) -> KeyframeTrack:
    """Bezier move: quadratic for 'bezier', cubic for 's_curve'/'b_curve'."""
    start, _, n = _check_span(frames)
    if kind == "bezier":
        if len(controls) != 1:
            raise ControlArityError(
                f"bezier needs exactly 1 control point, got {len(controls)}")
        positions = kernels.sample_qbezier(tuple(p0), tuple(controls[0]),
                                           tuple(p1), n)
    elif kind in ("s_curve", "b_curve"):
        if len(controls) != 2:
            raise ControlArityError(
                f"{kind} needs exactly 2 control points, got {len(controls)}")
        positions = kernels.sample_cbezier(tuple(p0), tuple(controls[0]),
                                           tuple(controls[1]), tuple(p1), n)
    else:
        raise ValueError(f"unknown curve kind {kind!r}")
    return _build(entity, start, positions, _const(rotation, n))


def default_controls(kind: str, p0: Vec3, p1: Vec3) -> list[Vec3]:
    """Control points when the agent supplies none.

    bezier: one control at the midpoint, pushed sideways by half the chord
    (intense bend). s_curve: controls at 1/3 and 2/3 on alternating sides
    at a quarter chord (moderate S shape). b_curve: both controls on the
    same side at a full chord (exaggerated bend).
    """
    dx, dy, dz = (p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2])
    chord = math.sqrt(dx * dx + dy * dy + dz * dz)
    horizontal = math.hypot(dx, dy)
    if horizontal > 1e-12:
        perp = (-dy / horizontal, dx / horizontal, 0.0)
    else:
        perp = (0.0, 1.0, 0.0)

    def along(t: float, offset: float) -> Vec3:
        return (
            p0[0] + dx * t + perp[0] * offset,
            p0[1] + dy * t + perp[1] * offset,
            p0[2] + dz * t + perp[2] * offset,
        )

    if kind == "bezier":
        return [along(0.5, 0.5 * chord)]
    if kind == "s_curve":
        return [along(1.0 / 3.0, 0.25 * chord), along(2.0 / 3.0, -0.25 * chord)]
    if kind == "b_curve":
        return [along(1.0 / 3.0, 1.0 * chord), along(2.0 / 3.0, 1.0 * chord)]
    raise ValueError(f"unknown curve kind {kind!r}")


def _segment_spans(frames: tuple[int, int], parts: int) -> list[tuple[int, int]]:
    """Split a span into contiguous integer sub-spans of near-equal length."""
    start, end = frames
    total = end - start
    bounds = [start + (total * k) // parts for k in range(parts + 1)]
    return [(bounds[k], bounds[k + 1]) for k in range(parts)]


def _merge_tracks(entity: str, segments: list[KeyframeTrack]) -> KeyframeTrack:
    """Concatenate contiguous segments, dropping duplicated seam keys."""
    keys: list[Keyframe] = list(segments[0].keys)
    for segment in segments[1:]:
        keys.extend(segment.keys[1:])
    return KeyframeTrack(entity, tuple(keys))


def gen_jump_track(entity: str, mode: str, p0: Vec3, p1: Vec3 | None,
                   height: float, frames: tuple[int, int], repeat: int = 1,
                   rotation: Vec3 = ZERO_ROTATION) -> KeyframeTrack:
    """Parabolic jump 4*h*t*(1-t) atop linear horizontal motion.

    in_place keeps the horizontal position fixed at p0; forward moves to
    p1. repeat > 1 chains consecutive jumps inside the same span.
    """
    start, end, _ = _check_span(frames)
    if mode not in ("in_place", "forward"):
        raise ValueError(f"unknown jump mode {mode!r}")
    if mode == "forward" and p1 is None:
        raise MissingTarget("forward jump requires a destination")
    if height <= 0:
        raise ValueError("jump height must be > 0")
    if repeat < 1:
        raise ValueError("repeat must be >= 1")

    if repeat > 1 and (end - start) < repeat:
        repeat = 1  # span too short to subdivide

    spans = _segment_spans((start, end), repeat)
    waypoints = [p0]
    for k in range(1, repeat + 1):
        if mode == "in_place":
            waypoints.append(p0)
        else:
            t = k / repeat
            waypoints.append((
                p0[0] + (p1[0] - p0[0]) * t,
                p0[1] + (p1[1] - p0[1]) * t,
                p0[2] + (p1[2] - p0[2]) * t,
            ))

    segments = []
    for (seg_start, seg_end), a, b in zip(spans, waypoints, waypoints[1:]):
        n = seg_end - seg_start + 1
        base = kernels.sample_linear(tuple(a), tuple(b), n, False)
        offsets = kernels.parabola_offsets(height, n)
        positions = [(x, y, z + dz) for (x, y, z), dz in zip(base, offsets)]
        segments.append(_build(entity, seg_start, positions,
                               _const(rotation, n)))
    return _merge_tracks(entity, segments)


def _normalize(direction: Vec3) -> Vec3:
    norm = math.sqrt(sum(c * c for c in direction))
    if norm < 1e-12:
        raise ValueError("direction must be non-zero")
    return (direction[0] / norm, direction[1] / norm, direction[2] / norm)


def gen_impact_track(entity: str, mode: str, p0: Vec3, direction: Vec3,
                     frames: tuple[int, int], yaw: float = 0.0) -> KeyframeTrack:
    """Collision response: pitch-over fall, short knock, or ballistic arc.

    fall_down pitches from 0 to pi/2 in place; knocked_down adds a short
    slide along the direction; knocked_away flies a parabolic arc three
    times as far and lands back on the ground.
    """
    start, _, n = _check_span(frames)
    if mode not in ("fall_down", "knocked_down", "knocked_away"):
        raise ValueError(f"unknown impact mode {mode!r}")

    if mode == "fall_down":
        distance = 0.0
    elif mode == "knocked_down":
        distance = KNOCKED_DOWN_DISTANCE
    else:
        distance = KNOCKED_AWAY_DISTANCE

    if distance > 0.0:
        dx, dy, _ = _normalize(direction)
    else:
        dx = dy = 0.0

    target = (p0[0] + dx * distance, p0[1] + dy * distance, 0.0)
    base = kernels.sample_linear(tuple(p0), target, n, False)
    if mode == "knocked_away":
        offsets = kernels.parabola_offsets(KNOCKED_AWAY_APEX, n)
        positions = [(x, y, z + dzz) for (x, y, z), dzz in zip(base, offsets)]
    else:
        positions = base

    last = n - 1
    rotations = [((math.pi / 2) * (i / last), 0.0, yaw) for i in range(n)]
    return _build(entity, start, positions, rotations)


def gen_recovery_track(entity: str, mode: str, p_current: Vec3,
                       frames: tuple[int, int], sky_height: float = SKY_HEIGHT,
                       yaw: float = 0.0) -> KeyframeTrack:
    """State recovery: stand back up, or descend from the air to the ground.

    Landing eases out: z(t) = z0 * (1-t)^2, so descent slows near the
    ground. When compiled into a timeline the start height chains from the
    entity's current altitude; sky_height is the default for direct calls.
    """
    start, _, n = _check_span(frames)
    last = n - 1
    if mode == "stand_up":
        positions = _const(tuple(p_current), n)
        rotations = [((math.pi / 2) * (1.0 - i / last), 0.0, yaw)
                     for i in range(n)]
    elif mode == "landing":
        z0 = sky_height
        positions = []
        for i in range(n):
            t = i / last
            positions.append((p_current[0], p_current[1], z0 * (1.0 - t) ** 2))
        rotations = _const((0.0, 0.0, yaw), n)
    else:
        raise ValueError(f"unknown recovery mode {mode!r}")
    return _build(entity, start, positions, rotations)


def gen_demo_track(entity: str, mode: str, p0: Vec3, frames: tuple[int, int],
                   heading: float = 0.0, pitch: float = 0.0) -> KeyframeTrack:
    """Showing off: oscillating yaw in place, or a closed drift circle.

    rotate_in_place swings yaw by +-ROTATE_AMPLITUDE around the initial
    heading (phase 0 at the start). drifting traces a full circle of
    radius DRIFT_RADIUS tangent to the heading, returning to p0 with the
    yaw following the path tangent.
    """
    start, _, n = _check_span(frames)
    last = n - 1
    if mode == "rotate_in_place":
        positions = _const(tuple(p0), n)
        rotations = []
        for i in range(n):
            t = i / last
            swing = ROTATE_AMPLITUDE * math.sin(2.0 * math.pi * ROTATE_CYCLES * t)
            rotations.append((pitch, 0.0, heading + swing))
        return _build(entity, start, positions, rotations)
    if mode == "drifting":
        # Circle center sits DRIFT_RADIUS to the left of the heading; the
        # start angle points back at p0 so the sweep begins tangent to it.
        cx = p0[0] - DRIFT_RADIUS * math.sin(heading)
        cy = p0[1] + DRIFT_RADIUS * math.cos(heading)
        start_angle = heading - math.pi / 2.0
        positions = kernels.sample_arc(cx, cy, p0[2], DRIFT_RADIUS,
                                       start_angle, 2.0 * math.pi, n)
        rotations = []
        for i in range(n):
            t = i / last
            rotations.append((pitch, 0.0, heading + 2.0 * math.pi * t))
        return _build(entity, start, positions, rotations)
    raise ValueError(f"unknown demo mode {mode!r}")


def gen_decoration_events(call: FunctionCall,
                          frames: tuple[int, int]) -> list[SceneEvent]:
    """One scene event spanning the window for a validated decoration call."""
    start, end, _ = _check_span(frames)
    spec = lookup(call.spec_name)
    if spec is None:
        raise ValueError(f"unknown decoration function {call.spec_name!r}")
    params = dict(call.args)
    if call.spec_name == "camera ring shot":
        params["sweep_radians"] = RING_SHOT_SWEEP
    return [SceneEvent(kind=call.spec_name, frame_span=(start, end),
                       target=call.target, params=params)]


def gen_motion_directive(call: FunctionCall, frames: tuple[int, int],
                         registry: EntityRegistry | None = None) -> MotionDirective:
    """Record a motion hand-off; no pose synthesis happens here."""
    start, end, _ = _check_span(frames)
    if registry is not None and call.target:
        entity = registry.get(call.target)
        if entity is None or entity.kind is not EntityKind.HUMANOID:
            raise NonHumanoidTarget(
                f"motion directive target {call.target!r} is not humanoid")
    return MotionDirective(
        entity=call.target or "",
        motion_category=call.spec_name,
        frame_span=(start, end),
        params=dict(call.args),
    )
