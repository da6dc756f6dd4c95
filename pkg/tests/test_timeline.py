import random

import pytest

from sceneweave.agents import (
    ActionAssignment,
    DecorationAssignment,
    DirectorDecision,
    DurationClass,
    MotionAssignment,
    WindowPlan,
)
from sceneweave.catalog import FunctionCall
from sceneweave.errors import CompileError
from sceneweave.story import EntityKind, EventWindow
from sceneweave.timeline import compile_timeline, duration_frames


def decision(duration=DurationClass.MODERATE, action=True, motion=False,
             decoration=False):
    return DirectorDecision(action, motion, decoration, duration)


def plan(index, duration, actions=(), motions=(), decorations=()):
    return WindowPlan(
        window=EventWindow(index=index, text=f"window {index}"),
        decision=decision(duration,
                          motion=bool(motions),
                          decoration=bool(decorations)),
        actions=list(actions),
        motions=list(motions),
        decorations=list(decorations),
    )


class TestDurationFrames:
    def test_mapping_at_24(self):
        assert duration_frames(DurationClass.FAST, 24) == 48
        assert duration_frames(DurationClass.MODERATE, 24) == 96
        assert duration_frames(DurationClass.SLOW, 24) == 144

    def test_emphasis_at_30(self):
        assert duration_frames(DurationClass.EMPHASIS, 30) == 300

    def test_custom_map(self):
        assert duration_frames(DurationClass.FAST, 10,
                               {DurationClass.FAST: 3}) == 30


class TestCompile:
    def test_two_window_accumulation(self, registry):
        plans = [
            plan(0, DurationClass.FAST,
                 [ActionAssignment("red sedan", "special action",
                                   "do nothing")]),
            plan(1, DurationClass.MODERATE,
                 [ActionAssignment("red sedan", "special action",
                                   "do nothing")]),
        ]
        timeline = compile_timeline(plans, registry, fps=24)
        assert [(c.start_frame, c.end_frame) for c in timeline.clips] == \
            [(0, 48), (48, 144)]
        assert timeline.total_frames == 144

    def test_position_chains_across_windows(self, registry):
        plans = [
            plan(0, DurationClass.FAST,
                 [ActionAssignment("red sedan", "straight line movement",
                                   "constant speed movement",
                                   {"destination": [10, 0, 0]})]),
            plan(1, DurationClass.FAST,
                 [ActionAssignment("red sedan", "straight line movement",
                                   "constant speed movement",
                                   {"destination": [10, 5, 0]})]),
        ]
        timeline = compile_timeline(plans, registry, fps=24)
        first_track = timeline.clips[0].tracks[0]
        second_track = timeline.clips[1].tracks[0]
        assert first_track.keys[-1].position == (10.0, 0.0, 0.0)
        assert second_track.keys[0].position == (10.0, 0.0, 0.0)
        assert second_track.keys[-1].position == (10.0, 5.0, 0.0)

    def test_start_positions_come_from_registry(self, registry):
        plans = [plan(0, DurationClass.FAST,
                      [ActionAssignment("audience bunny", "jumping motion",
                                        "jump in place")])]
        timeline = compile_timeline(plans, registry, fps=24)
        assert timeline.clips[0].tracks[0].keys[0].position == (0.0, 4.0, 0.0)

    def test_frame_conservation(self, registry):
        durations = [DurationClass.FAST, DurationClass.SLOW,
                     DurationClass.EMPHASIS, DurationClass.MODERATE]
        plans = [plan(i, d) for i, d in enumerate(durations)]
        timeline = compile_timeline(plans, registry, fps=24)
        expected = sum(duration_frames(d, 24) for d in durations)
        assert timeline.total_frames == expected

    def test_motion_and_decoration_spans(self, registry):
        plans = [plan(
            0, DurationClass.MODERATE,
            actions=[ActionAssignment("red sedan", "special action",
                                      "do nothing")],
            motions=[MotionAssignment(FunctionCall(
                "human-object interaction", "referee",
                {"object": "flag"}))],
            decorations=[DecorationAssignment(FunctionCall(
                "fireworks", None))],
        )]
        timeline = compile_timeline(plans, registry, fps=24)
        clip = timeline.clips[0]
        assert clip.motion_directives[0].frame_span == (0, 96)
        assert clip.scene_events[0].frame_span == (0, 96)

    def test_compile_error_carries_window_index(self, registry):
        bad = plan(1, DurationClass.FAST,
                   [ActionAssignment("red sedan", "jumping motion",
                                     "jump in place", {"height": -1.0})])
        ok = plan(0, DurationClass.FAST,
                  [ActionAssignment("red sedan", "special action",
                                    "do nothing")])
        with pytest.raises(CompileError) as err:
            compile_timeline([ok, bad], registry, fps=24)
        assert err.value.window_index == 1

    def test_landing_starts_from_current_altitude(self, registry):
        plans = [plan(0, DurationClass.FAST,
                      [ActionAssignment("red sedan", "state recovery action",
                                        "landing from the sky")])]
        timeline = compile_timeline(plans, registry, fps=24)
        keys = timeline.clips[0].tracks[0].keys
        # grounded entity: landing degrades to a ground-level hold
        assert all(k.position[2] == 0.0 for k in keys)


ALL_SUBS = [
    ("special action", "do nothing", {}),
    ("straight line movement", "constant speed movement", {}),
    ("straight line movement", "variable speed movement", {}),
    ("curved movement", "bezier curve movement", {}),
    ("curved movement", "S-curve movement", {}),
    ("curved movement", "B-curve movement", {}),
    ("jumping motion", "jump in place", {"repeat": 2}),
    ("jumping motion", "jump forward", {}),
    ("impact motion", "fall down", {}),
    ("impact motion", "knocked down", {}),
    ("impact motion", "knocked away", {}),
    ("state recovery action", "stand up", {}),
    ("state recovery action", "landing from the sky", {}),
    ("demonstration action", "rotate in place", {}),
    ("demonstration action", "drifting", {}),
]


def random_plans(rng, registry, max_windows=6):
    names = [e.name for e in registry
             if e.kind is not EntityKind.HUMANOID]
    plans = []
    for index in range(rng.randint(1, max_windows)):
        duration = rng.choice(list(DurationClass))
        actions = []
        for name in rng.sample(names, rng.randint(1, len(names))):
            major, sub, args = rng.choice(ALL_SUBS)
            actions.append(ActionAssignment(name, major, sub, dict(args)))
        plans.append(plan(index, duration, actions))
    return plans


def check_invariants(timeline, plans, fps):
    # contiguity
    previous_end = 0
    for clip in timeline.clips:
        assert clip.start_frame == previous_end
        previous_end = clip.end_frame
    # frame conservation
    total = sum(duration_frames(p.decision.duration, fps) for p in plans)
    assert timeline.total_frames == total == previous_end
    # strict key monotonicity
    for clip in timeline.clips:
        for track in clip.tracks:
            frames = [k.frame for k in track.keys]
            assert all(b > a for a, b in zip(frames, frames[1:]))
    # cross-clip position continuity per entity
    last_position = {}
    for clip in timeline.clips:
        for track in clip.tracks:
            if track.entity in last_position:
                previous = last_position[track.entity]
                for a, b in zip(previous, track.keys[0].position):
                    assert abs(a - b) <= 1e-6
            last_position[track.entity] = track.keys[-1].position


class TestRandomizedInvariants:
    def test_invariants_hold_on_random_plans(self, registry):
        rng = random.Random(20)
        for _ in range(60):
            plans = random_plans(rng, registry)
            timeline = compile_timeline(plans, registry, fps=24)
            check_invariants(timeline, plans, 24)
