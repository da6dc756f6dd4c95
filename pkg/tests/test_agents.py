import random

import pytest

from sceneweave import catalog
from sceneweave.agents import (
    ActionAssignment,
    DurationClass,
    Planner,
    parse_action_response,
    plan_record,
    run_action_agent,
    run_decoration_agent,
    run_director,
    run_motion_agent,
)
from sceneweave.checks import TextualChecker
from sceneweave.errors import (
    HierarchyViolation,
    InvalidCall,
    ParseError,
    PlanFailure,
)
from sceneweave.gateway import PromptContext, ScriptedBackend
from sceneweave.story import EventWindow

from conftest import (
    action_text,
    decoration_text,
    director_text,
    fenced,
    motion_text,
    verdict_text,
)


def window(text="The audience bunny jumps while the referee waves the flag.",
           index=0, entities=("audience bunny", "referee")):
    return EventWindow(index=index, text=text,
                       entities_mentioned=tuple(entities))


class TestDirector:
    def test_all_libraries_slow(self):
        backend = ScriptedBackend({"director": [
            director_text(True, True, True, "slow")]})
        decision = run_director(window(), backend, PromptContext.default())
        assert decision.use_action and decision.use_motion \
            and decision.use_decoration
        assert decision.duration is DurationClass.SLOW

    def test_action_only_fast(self):
        backend = ScriptedBackend({"director": [
            director_text(True, False, False, "fast")]})
        decision = run_director(window(), backend, PromptContext.default())
        assert (decision.use_action, decision.use_motion,
                decision.use_decoration) == (True, False, False)
        assert decision.duration is DurationClass.FAST

    def test_invalid_duration_class(self):
        backend = ScriptedBackend({"director": [
            director_text(True, False, False, "quick")]})
        with pytest.raises(ParseError):
            run_director(window(), backend, PromptContext.default())

    def test_all_false_coerced_to_idle_action(self):
        backend = ScriptedBackend({"director": [
            director_text(False, False, False, "moderate")]})
        decision = run_director(window(), backend, PromptContext.default())
        assert decision.use_action and decision.coerced_idle


class TestActionAgent:
    def test_bunny_jump_twice_and_idle_cars(self, registry):
        backend = ScriptedBackend({"action": [action_text(
            ("audience bunny", "jumping motion", "jump in place",
             {"repeat": 2}),
            ("red sedan", "special action", "do nothing", {}),
            ("blue race car", "special action", "do nothing", {}),
        )]})
        assignments = run_action_agent(window(), backend,
                                       PromptContext.default(), registry)
        bunny = assignments[0]
        assert bunny.major_category == "jumping motion"
        assert bunny.sub_action == "jump in place"
        assert bunny.args == {"repeat": 2}
        assert {(a.entity, a.sub_action) for a in assignments[1:]} == {
            ("red sedan", "do nothing"), ("blue race car", "do nothing")}

    def test_cross_category_pair_rejected(self, registry):
        text = action_text(("red sedan", "curved movement", "jump forward",
                            {}))
        with pytest.raises(HierarchyViolation):
            parse_action_response(text, registry)

    def test_unknown_major_rejected(self, registry):
        text = action_text(("red sedan", "teleportation", "do nothing", {}))
        with pytest.raises(HierarchyViolation):
            parse_action_response(text, registry)

    def test_humanoid_target_rejected(self, registry):
        text = action_text(("referee", "special action", "do nothing", {}))
        with pytest.raises(InvalidCall):
            parse_action_response(text, registry)

    def test_mentioned_unassigned_gets_implicit_idle(self, registry):
        backend = ScriptedBackend({"action": [action_text(
            ("red sedan", "straight line movement",
             "constant speed movement", {"destination": [5, 0, 0]}),
        )]})
        w = window(text="The red sedan passes the blue race car.",
                   entities=("red sedan", "blue race car"))
        assignments = run_action_agent(w, backend, PromptContext.default(),
                                       registry)
        implicit = [a for a in assignments if a.entity == "blue race car"]
        assert implicit == [ActionAssignment("blue race car",
                                             "special action", "do nothing")]

    def test_hierarchy_fuzz(self, registry):
        majors = list(catalog.SUBS_BY_MAJOR)
        subs = [s for v in catalog.SUBS_BY_MAJOR.values() for s in v]
        fake = ["warp drive", "quantum hop", "unlisted"]
        rng = random.Random(99)
        for _ in range(300):
            major = rng.choice(majors + fake)
            sub = rng.choice(subs + fake)
            text = action_text(("red sedan", major, sub, {}))
            valid = catalog.hierarchy_pair_valid(major, sub)
            if valid:
                parsed = parse_action_response(text, registry)
                assert parsed[0].major_category == major
            else:
                with pytest.raises(HierarchyViolation):
                    parse_action_response(text, registry)


class TestMotionAgent:
    def test_referee_waves_flag(self, registry):
        backend = ScriptedBackend({"motion": [motion_text(
            ("referee", "human-object interaction", {"object": "flag"}))]})
        assignments = run_motion_agent(window(), backend,
                                       PromptContext.default(), registry)
        assert len(assignments) == 1
        assert assignments[0].call.spec_name == "human-object interaction"

    def test_empty_when_no_humanoid(self, registry):
        backend = ScriptedBackend({"motion": [fenced({"assignments": []})]})
        assignments = run_motion_agent(
            window(text="The cars wait.", entities=()), backend,
            PromptContext.default(), registry)
        assert assignments == []

    def test_non_humanoid_target_violation(self, registry):
        backend = ScriptedBackend({"motion": [motion_text(
            ("red sedan", "special motion", {}))]})
        with pytest.raises(InvalidCall):
            run_motion_agent(window(), backend, PromptContext.default(),
                             registry)


class TestDecorationAgent:
    def test_window5_light_and_camera(self, registry):
        backend = ScriptedBackend({"decoration": [decoration_text(
            ("light illumination", "referee", {}),
            ("switching camera perspective", "audience bunny", {}),
        )]})
        assignments = run_decoration_agent(window(), backend,
                                           PromptContext.default(), registry)
        assert [a.call.spec_name for a in assignments] == [
            "light illumination", "switching camera perspective"]

    def test_fireworks_celebration(self, registry):
        backend = ScriptedBackend({"decoration": [decoration_text(
            ("fireworks", None, {}))]})
        assignments = run_decoration_agent(window(), backend,
                                           PromptContext.default(), registry)
        assert assignments[0].call.spec_name == "fireworks"
        assert assignments[0].call.target is None

    def test_unknown_function_rejected(self, registry):
        backend = ScriptedBackend({"decoration": [decoration_text(
            ("confetti", None, {}))]})
        with pytest.raises(InvalidCall):
            run_decoration_agent(window(), backend, PromptContext.default(),
                                 registry)


def make_planner(registry, responses, with_checker=True, max_iters=3):
    backend = ScriptedBackend(responses)
    checker = TextualChecker(backend) if with_checker else None
    return Planner(backend, registry, checker=checker, max_iters=max_iters)


class TestPlanWindow:
    def test_happy_path_all_agents(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(True, True, True, "slow")],
            "action": [action_text(
                ("audience bunny", "jumping motion", "jump in place",
                 {"repeat": 2}))],
            "motion": [motion_text(
                ("referee", "human-object interaction",
                 {"object": "flag"}))],
            "decoration": [decoration_text(
                ("switching camera perspective", "audience bunny", {}))],
            "textual_check": [verdict_text(True)] * 4,
        })
        plan = planner.plan_window(window())
        assert plan.decision.duration is DurationClass.SLOW
        assert len(plan.actions) == 1
        assert len(plan.motions) == 1
        assert len(plan.decorations) == 1
        assert all(v.passed for v in plan.check_trace)
        assert len(plan.check_trace) == 4

    def test_decoration_corrected_after_feedback(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(False, False, True, "moderate",)],
            "decoration": [
                decoration_text(("light illumination", "referee", {}),
                                ("switching camera perspective",
                                 "audience bunny", {})),
                decoration_text(("switching camera perspective",
                                 "audience bunny", {})),
            ],
            "textual_check": [
                verdict_text(True),  # director
                verdict_text(False, "no need for the light illumination"),
                verdict_text(True),
            ],
        })
        plan = planner.plan_window(window())
        assert [a.call.spec_name for a in plan.decorations] == [
            "switching camera perspective"]
        decoration_trace = [v for v in plan.check_trace
                            if v.subject == "decoration"]
        assert [v.passed for v in decoration_trace] == [False, True]
        assert "light illumination" in decoration_trace[0].feedback

    def test_perpetually_wrong_fixture_fails(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("red sedan", "special action",
                                    "do nothing", {}))] * 3,
            "textual_check": [verdict_text(True)] +
            [verdict_text(False, "still wrong")] * 3,
        }, max_iters=3)
        with pytest.raises(PlanFailure):
            planner.plan_window(window())

    def test_library_flag_gating(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("red sedan", "special action",
                                    "do nothing", {}))],
            "textual_check": [verdict_text(True)] * 2,
        })
        plan = planner.plan_window(window())
        assert plan.motions == [] and plan.decorations == []

    def test_coerced_idle_makes_no_action_call(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(False, False, False, "fast")],
            # no action fixtures on purpose: the agent must not be invoked
            "textual_check": [verdict_text(True)],
        })
        plan = planner.plan_window(window())
        assert plan.decision.coerced_idle
        assert {a.entity for a in plan.actions} == {"audience bunny"}
        assert all(a.sub_action == "do nothing" for a in plan.actions)

    def test_deterministic_with_scripted_backend(self, registry):
        responses = {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("red sedan", "special action",
                                    "do nothing", {}))],
            "textual_check": [verdict_text(True)] * 2,
        }
        records = []
        for _ in range(2):
            planner = make_planner(registry, responses)
            records.append(plan_record(planner.plan_window(window())))
        assert records[0] == records[1]

    def test_checker_disabled_accepts_first_output(self, registry):
        planner = make_planner(registry, {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("red sedan", "demonstration action",
                                    "drifting", {}))],
        }, with_checker=False)
        plan = planner.plan_window(window())
        assert plan.check_trace == []
        assert plan.actions[0].sub_action == "drifting"

    def test_max_backend_calls_per_agent(self, registry):
        # producer is invoked at most max_iters times per agent per window
        backend = ScriptedBackend({
            "director": [director_text(True, False, False, "fast")] * 5,
            "action": [action_text(("red sedan", "special action",
                                    "do nothing", {}))] * 5,
            "textual_check": [verdict_text(True)] +
            [verdict_text(False, "no")] * 5,
        })
        calls = {"director": 0, "action": 0}
        original = backend.complete

        def counting(bundle):
            if bundle.role_tag in calls:
                calls[bundle.role_tag] += 1
            return original(bundle)

        backend.complete = counting
        planner = Planner(backend, registry,
                          checker=TextualChecker(backend), max_iters=3)
        with pytest.raises(PlanFailure):
            planner.plan_window(window())
        assert calls["director"] == 1
        assert calls["action"] == 3
