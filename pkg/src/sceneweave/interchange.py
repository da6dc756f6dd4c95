"""Canonical timeline interchange format (`.s3a.json`).

Serialization is deterministic: sorted keys, floats rounded to six
decimals, compact separators, one trailing newline. serialize(parse(x))
returns x byte-for-byte, and the digest pairs the interchange document
with its generated render script.
"""

from __future__ import annotations

import hashlib
import json

from .timeline import Clip, SceneTimeline
from .tracks import Keyframe, KeyframeTrack, MotionDirective, SceneEvent

SCHEMA_VERSION = "1"
FILE_EXTENSION = ".s3a.json"


def _round(value: float) -> float:
    rounded = round(float(value), 6)
    return 0.0 if rounded == 0.0 else rounded  # normalize -0.0


def _vec(values) -> list[float]:
    return [_round(v) for v in values]


def _params(params: dict) -> dict:
    out = {}
    for key, value in sorted(params.items()):
        if isinstance(value, bool):
            out[key] = value
        elif isinstance(value, float):
            out[key] = _round(value)
        elif isinstance(value, (list, tuple)):
            out[key] = [
                _vec(v) if isinstance(v, (list, tuple)) else
                (_round(v) if isinstance(v, float) else v)
                for v in value
            ]
        else:
            out[key] = value
    return out


def timeline_document(timeline: SceneTimeline) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "fps": timeline.fps,
        "total_frames": timeline.total_frames,
        "clips": [
            {
                "window_index": clip.window_index,
                "start_frame": clip.start_frame,
                "end_frame": clip.end_frame,
                "tracks": [
                    {
                        "entity": track.entity,
                        "keys": [
                            {
                                "frame": key.frame,
                                "position": _vec(key.position),
                                "rotation_euler": _vec(key.rotation_euler),
                                "scale": _vec(key.scale),
                            }
                            for key in track.keys
                        ],
                    }
                    for track in clip.tracks
                ],
                "motion_directives": [
                    {
                        "entity": directive.entity,
                        "motion_category": directive.motion_category,
                        "frame_span": list(directive.frame_span),
                        "params": _params(directive.params),
                    }
                    for directive in clip.motion_directives
                ],
                "scene_events": [
                    {
                        "kind": event.kind,
                        "target": event.target,
                        "frame_span": list(event.frame_span),
                        "params": _params(event.params),
                    }
                    for event in clip.scene_events
                ],
            }
            for clip in timeline.clips
        ],
    }


def emit_timeline(timeline: SceneTimeline) -> bytes:
    document = timeline_document(timeline)
    text = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


def timeline_digest(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def parse_timeline(payload: bytes) -> SceneTimeline:
    """Rebuild a SceneTimeline from interchange bytes; validates schema."""
    document = json.loads(payload.decode("utf-8"))
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    clips = []
    for clip_doc in document["clips"]:
        tracks = tuple(
            KeyframeTrack(
                entity=track_doc["entity"],
                keys=tuple(
                    Keyframe(
                        frame=key["frame"],
                        position=tuple(key["position"]),
                        rotation_euler=tuple(key["rotation_euler"]),
                        scale=tuple(key["scale"]),
                    )
                    for key in track_doc["keys"]
                ),
            )
            for track_doc in clip_doc["tracks"]
        )
        directives = tuple(
            MotionDirective(
                entity=doc["entity"],
                motion_category=doc["motion_category"],
                frame_span=tuple(doc["frame_span"]),
                params=doc.get("params", {}),
            )
            for doc in clip_doc["motion_directives"]
        )
        events = tuple(
            SceneEvent(
                kind=doc["kind"],
                target=doc.get("target"),
                frame_span=tuple(doc["frame_span"]),
                params=doc.get("params", {}),
            )
            for doc in clip_doc["scene_events"]
        )
        clips.append(Clip(
            window_index=clip_doc["window_index"],
            start_frame=clip_doc["start_frame"],
            end_frame=clip_doc["end_frame"],
            tracks=tracks,
            motion_directives=directives,
            scene_events=events,
        ))
    return SceneTimeline(
        fps=document["fps"],
        clips=tuple(clips),
        total_frames=document["total_frames"],
    )
