import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sceneweave.story import Entity, EntityKind, EntityRegistry, Story


def fenced(payload) -> str:
    """Wrap a payload in the fenced JSON block agents answer with."""
    return "```json\n" + json.dumps(payload) + "\n```"


def director_text(action=True, motion=False, decoration=False,
                  duration="moderate") -> str:
    return fenced({"use_action": action, "use_motion": motion,
                   "use_decoration": decoration, "duration": duration})


def action_text(*assignments) -> str:
    return fenced({"assignments": [
        {"entity": e, "major_category": major, "sub_action": sub,
         "args": args or {}}
        for (e, major, sub, args) in assignments
    ]})


def motion_text(*assignments) -> str:
    return fenced({"assignments": [
        {"entity": e, "function": fn, "args": args or {}}
        for (e, fn, args) in assignments
    ]})


def decoration_text(*assignments) -> str:
    return fenced({"assignments": [
        {"function": fn, "target": target, "args": args or {}}
        for (fn, target, args) in assignments
    ]})


def verdict_text(passed: bool, feedback: str = "") -> str:
    return fenced({"verdict": "pass" if passed else "fail",
                   "feedback": feedback})


@pytest.fixture
def registry() -> EntityRegistry:
    return EntityRegistry([
        Entity("red sedan", EntityKind.CHARACTER, "assets/red_sedan.glb",
               (-2.0, 0.0, 0.0)),
        Entity("blue race car", EntityKind.CHARACTER,
               "assets/blue_race_car.glb", (2.0, 0.0, 0.0)),
        Entity("audience bunny", EntityKind.CHARACTER, "assets/bunny.glb",
               (0.0, 4.0, 0.0)),
        Entity("referee", EntityKind.HUMANOID, "assets/referee.fbx",
               (0.0, -3.0, 0.0)),
    ])


@pytest.fixture
def story(registry) -> Story:
    return Story(
        title="Race Day",
        text="The red sedan and the blue race car wait. The referee raises "
             "the flag.",
        registry=registry,
    )
