"""Compile ordered window plans into one frame-accumulated scene timeline.

Clips abut exactly: clip k starts where clip k-1 ends, driven by a running
accumulated frame counter. Entity positions chain across clips (a window's
tracks start from the entity's last known position), which is why
compilation is sequential by contract.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import tracks as trk
from .agents import ActionAssignment, DurationClass, WindowPlan
from .errors import CompileError
from .story import EntityRegistry
from .tracks import KeyframeTrack, MotionDirective, SceneEvent, Vec3

logger = logging.getLogger(__name__)

DEFAULT_FPS = 24

# Seconds per duration class; emphasis marks highlighted moments and runs
# longest.
DEFAULT_DURATION_SECONDS = {
    DurationClass.FAST: 2,
    DurationClass.MODERATE: 4,
    DurationClass.SLOW: 6,
    DurationClass.EMPHASIS: 10,
}

# Movement default when the narrative names no destination.
DEFAULT_TRAVEL_DISTANCE = 5.0


@dataclass(frozen=True)
class Clip:
    window_index: int
    start_frame: int
    end_frame: int
    tracks: tuple[KeyframeTrack, ...] = ()
    motion_directives: tuple[MotionDirective, ...] = ()
    scene_events: tuple[SceneEvent, ...] = ()

    def __post_init__(self):
        if self.start_frame >= self.end_frame:
            raise ValueError(f"clip {self.window_index}: empty frame span")
        for track in self.tracks:
            if track.start_frame < self.start_frame or track.end_frame > self.end_frame:
                raise ValueError(
                    f"clip {self.window_index}: track for {track.entity!r} "
                    "outside clip span")
        for directive in self.motion_directives:
            if directive.frame_span[0] < self.start_frame \
                    or directive.frame_span[1] > self.end_frame:
                raise ValueError(
                    f"clip {self.window_index}: directive outside clip span")
        for event in self.scene_events:
            if event.frame_span[0] < self.start_frame \
                    or event.frame_span[1] > self.end_frame:
                raise ValueError(
                    f"clip {self.window_index}: event outside clip span")


@dataclass(frozen=True)
class SceneTimeline:
    fps: int
    clips: tuple[Clip, ...]
    total_frames: int

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        previous_end = 0
        for clip in self.clips:
            if clip.start_frame != previous_end:
                raise ValueError(
                    f"clip {clip.window_index} starts at {clip.start_frame}, "
                    f"expected {previous_end}")
            previous_end = clip.end_frame
        if self.clips and self.total_frames != self.clips[-1].end_frame:
            raise ValueError("total_frames must equal the last clip end")

    def total_keys(self) -> int:
        return sum(len(t.keys) for c in self.clips for t in c.tracks)


def duration_frames(duration: DurationClass, fps: int,
                    seconds_map: dict | None = None) -> int:
    if fps <= 0:
        raise ValueError("fps must be positive")
    seconds = (seconds_map or DEFAULT_DURATION_SECONDS)[duration]
    return int(round(seconds * fps))


@dataclass
class _EntityState:
    position: Vec3
    heading: float = 0.0
    pitch: float = 0.0

    @property
    def rotation(self) -> Vec3:
        return (self.pitch, 0.0, self.heading)


def _heading_vector(state: _EntityState) -> Vec3:
    return (math.cos(state.heading), math.sin(state.heading), 0.0)


def _default_destination(state: _EntityState) -> Vec3:
    hx, hy, _ = _heading_vector(state)
    x, y, z = state.position
    return (x + hx * DEFAULT_TRAVEL_DISTANCE, y + hy * DEFAULT_TRAVEL_DISTANCE, z)


def _as_vec3(value) -> Vec3:
    return (float(value[0]), float(value[1]), float(value[2]))


def _action_track(assignment: ActionAssignment, state: _EntityState,
                  span: tuple[int, int]) -> KeyframeTrack:
    """Map one validated action assignment to its generator."""
    entity = assignment.entity
    sub = assignment.sub_action
    args = assignment.args
    p0 = state.position

    if sub == "do nothing":
        return trk.gen_hold_track(entity, p0, span, rotation=state.rotation)
    if sub in ("constant speed movement", "variable speed movement"):
        destination = (_as_vec3(args["destination"]) if "destination" in args
                       else _default_destination(state))
        profile = "constant" if sub == "constant speed movement" else "ease_in_out"
        return trk.gen_linear_track(entity, p0, destination, span,
                                    profile=profile, rotation=state.rotation)
    if sub in ("bezier curve movement", "S-curve movement", "B-curve movement"):
        kind = {"bezier curve movement": "bezier",
                "S-curve movement": "s_curve",
                "B-curve movement": "b_curve"}[sub]
        destination = (_as_vec3(args["destination"]) if "destination" in args
                       else _default_destination(state))
        if kind == "bezier" and "control" in args:
            controls = [_as_vec3(args["control"])]
        elif kind != "bezier" and "controls" in args:
            controls = [_as_vec3(c) for c in args["controls"]]
        else:
            controls = trk.default_controls(kind, p0, destination)
        return trk.gen_curve_track(entity, kind, p0, destination, controls,
                                   span, rotation=state.rotation)
    if sub == "jump in place":
        return trk.gen_jump_track(entity, "in_place", p0, None,
                                  float(args.get("height", 1.0)), span,
                                  repeat=int(args.get("repeat", 1)),
                                  rotation=state.rotation)
    if sub == "jump forward":
        destination = (_as_vec3(args["destination"]) if "destination" in args
                       else _default_destination(state))
        return trk.gen_jump_track(entity, "forward", p0, destination,
                                  float(args.get("height", 1.0)), span,
                                  rotation=state.rotation)
    if sub in ("fall down", "knocked down", "knocked away"):
        mode = {"fall down": "fall_down", "knocked down": "knocked_down",
                "knocked away": "knocked_away"}[sub]
        direction = (_as_vec3(args["direction"]) if "direction" in args
                     else _heading_vector(state))
        return trk.gen_impact_track(entity, mode, p0, direction, span,
                                    yaw=state.heading)
    if sub == "stand up":
        return trk.gen_recovery_track(entity, "stand_up", p0, span,
                                      yaw=state.heading)
    if sub == "landing from the sky":
        # Continuity rule: start from the entity's current altitude; the
        # generator's sky-height default applies only to direct calls.
        return trk.gen_recovery_track(entity, "landing", p0, span,
                                      sky_height=p0[2], yaw=state.heading)
    if sub == "rotate in place":
        return trk.gen_demo_track(entity, "rotate_in_place", p0, span,
                                  heading=state.heading, pitch=state.pitch)
    if sub == "drifting":
        return trk.gen_demo_track(entity, "drifting", p0, span,
                                  heading=state.heading, pitch=state.pitch)
    raise ValueError(f"no generator for sub-action {sub!r}")


def _advance_state(state: _EntityState, assignment: ActionAssignment,
                   track: KeyframeTrack) -> None:
    last = track.keys[-1]
    first = track.keys[0]
    dx = last.position[0] - first.position[0]
    dy = last.position[1] - first.position[1]
    state.position = last.position
    if math.hypot(dx, dy) > 1e-9:
        state.heading = math.atan2(dy, dx)
    if assignment.sub_action in ("fall down", "knocked down", "knocked away"):
        state.pitch = math.pi / 2
    elif assignment.sub_action in ("stand up", "landing from the sky"):
        state.pitch = 0.0


def compile_timeline(plans: list[WindowPlan], registry: EntityRegistry,
                     fps: int = DEFAULT_FPS,
                     seconds_map: dict | None = None) -> SceneTimeline:
    """Accumulate plans along the timeline into contiguous clips."""
    states: dict[str, _EntityState] = {
        entity.name: _EntityState(position=tuple(entity.start_position))
        for entity in registry
    }
    clips: list[Clip] = []
    accumulated_frame = 0

    for plan in plans:
        frames = duration_frames(plan.decision.duration, fps, seconds_map)
        span = (accumulated_frame, accumulated_frame + frames)
        try:
            clip_tracks: list[KeyframeTrack] = []
            for assignment in plan.actions:
                state = states.get(assignment.entity)
                if state is None:
                    state = _EntityState(position=(0.0, 0.0, 0.0))
                    states[assignment.entity] = state
                track = _action_track(assignment, state, span)
                _advance_state(state, assignment, track)
                clip_tracks.append(track)
            directives = tuple(
                trk.gen_motion_directive(m.call, span, registry)
                for m in plan.motions
            )
            events = []
            for d in plan.decorations:
                events.extend(trk.gen_decoration_events(d.call, span))
            clip = Clip(
                window_index=plan.window.index,
                start_frame=span[0],
                end_frame=span[1],
                tracks=tuple(clip_tracks),
                motion_directives=directives,
                scene_events=tuple(events),
            )
        except Exception as exc:
            raise CompileError(plan.window.index, exc) from exc
        clips.append(clip)
        accumulated_frame += frames

    return SceneTimeline(fps=fps, clips=tuple(clips),
                         total_frames=accumulated_frame)
