"""Render-script generation for the Blender scripting dialect.

The script is plain Python against the bpy API: one `_key(...)` call per
keyframe (so insertions are countable and equal the timeline's key count),
one `_event_*` call per scene event, and one `_directive(...)` log line
per motion directive. Generation is deterministic; the header carries the
schema version and the digest of the interchange document the script was
generated from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedEvent
from .interchange import SCHEMA_VERSION, emit_timeline, timeline_digest
from .timeline import SceneTimeline

TARGET_DIALECT = "blender-python"

_EVENT_EMITTERS = {
    "switching camera perspective": "_event_switch_camera",
    "light illumination": "_event_light_illumination",
    "particle floc": "_event_particle_floc",
    "beaming material": "_event_beaming_material",
    "fireworks": "_event_fireworks",
    "sun light adjustment": "_event_sun_light",
    "camera ring shot": "_event_camera_ring_shot",
}


@dataclass(frozen=True)
class ScriptText:
    text: str
    target_dialect: str
    timeline_digest: str


def _fmt(value: float) -> str:
    rounded = round(float(value), 6)
    if rounded == 0.0:
        rounded = 0.0
    return repr(rounded)


def _fmt_vec(values) -> str:
    return "(" + ", ".join(_fmt(v) for v in values) + ")"


_PRELUDE = '''\
import json

try:
    import bpy
except ImportError:  # outside the 3D tool: dry-run, log only
    bpy = None

_WARNINGS = []


def _object(name):
    if bpy is None:
        return None
    obj = bpy.data.objects.get(name)
    if obj is None and name not in _WARNINGS:
        _WARNINGS.append(name)
        print("WARN missing scene object: %s" % name)
    return obj


def _key(name, frame, loc, rot, scale):
    obj = _object(name)
    if obj is None:
        return
    obj.location = loc
    obj.rotation_euler = rot
    obj.scale = scale
    obj.keyframe_insert(data_path="location", frame=frame)
    obj.keyframe_insert(data_path="rotation_euler", frame=frame)
    obj.keyframe_insert(data_path="scale", frame=frame)


def _marker(label, frame):
    if bpy is None:
        return
    bpy.context.scene.timeline_markers.new(label, frame=frame)


def _event_switch_camera(target, start, end, params):
    _marker("camera:%s" % target, start)


def _event_light_illumination(target, start, end, params):
    _marker("light:%s" % target, start)


def _event_particle_floc(target, start, end, params):
    _marker("floc:%s" % target, start)


def _event_beaming_material(target, start, end, params):
    _marker("beam:%s" % target, start)


def _event_fireworks(target, start, end, params):
    _marker("fireworks", start)


def _event_sun_light(target, start, end, params):
    _marker("sunlight", start)


def _event_camera_ring_shot(target, start, end, params):
    _marker("ringshot:%s" % target, start)


def _directive(entity, category, start, end, params):
    print("DIRECTIVE %s" % json.dumps(
        {"entity": entity, "category": category, "start": start,
         "end": end, "params": params}, sort_keys=True))
'''


def emit_script(timeline: SceneTimeline) -> ScriptText:
    """Generate the executable render script for a compiled timeline."""
    payload = emit_timeline(timeline)
    digest = timeline_digest(payload)

    lines: list[str] = []
    lines.append(
        f"# scene timeline script schema_version={SCHEMA_VERSION} "
        f"digest={digest}")
    lines.append(f"# dialect: {TARGET_DIALECT}")
    lines.append("")
    lines.append(_PRELUDE)
    lines.append(f"FPS = {timeline.fps}")
    lines.append(f"TOTAL_FRAMES = {timeline.total_frames}")
    lines.append("")
    lines.append("if bpy is not None:")
    lines.append("    bpy.context.scene.render.fps = FPS")
    lines.append("    bpy.context.scene.frame_start = 0")
    lines.append("    bpy.context.scene.frame_end = TOTAL_FRAMES")
    lines.append("")

    for clip in timeline.clips:
        lines.append(f"# clip {clip.window_index}: frames "
                     f"[{clip.start_frame}, {clip.end_frame}]")
        for track in clip.tracks:
            for key in track.keys:
                lines.append(
                    f"_key({track.entity!r}, {key.frame}, "
                    f"{_fmt_vec(key.position)}, {_fmt_vec(key.rotation_euler)}, "
                    f"{_fmt_vec(key.scale)})")
        for event in clip.scene_events:
            emitter = _EVENT_EMITTERS.get(event.kind)
            if emitter is None:
                raise UnsupportedEvent(f"no emitter for event kind "
                                       f"{event.kind!r}")
            params = _params_literal(event.params)
            start, end = event.frame_span
            lines.append(f"{emitter}({event.target!r}, {start}, {end}, "
                         f"{params})")
        for directive in clip.motion_directives:
            start, end = directive.frame_span
            params = _params_literal(directive.params)
            lines.append(
                f"_directive({directive.entity!r}, "
                f"{directive.motion_category!r}, {start}, {end}, {params})")
        lines.append("")

    lines.append('print("keyframes: %d" % ' + str(timeline.total_keys()) + ")")
    text = "\n".join(lines) + "\n"
    return ScriptText(text=text, target_dialect=TARGET_DIALECT,
                      timeline_digest=digest)


def _params_literal(params: dict) -> str:
    items = []
    for key, value in sorted(params.items()):
        items.append(f"{key!r}: {_value_literal(value)}")
    return "{" + ", ".join(items) + "}"


def _value_literal(value) -> str:
    if isinstance(value, bool):
        return repr(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_value_literal(v) for v in value) + "]"
    return repr(value)


def count_key_insertions(script_text: str) -> int:
    """Number of keyframe insertion calls in a generated script."""
    return sum(1 for line in script_text.splitlines()
               if line.startswith("_key("))
