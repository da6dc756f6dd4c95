import pytest

from sceneweave.checks import (
    BagOfWordsEmbedder,
    CheckVerdict,
    GENERIC_FEEDBACK,
    TextualChecker,
    check_loop,
    visual_review,
)
from sceneweave.errors import (
    CaptionerUnavailable,
    CheckBudgetExhausted,
    ParseError,
)
from sceneweave.gateway import ScriptedBackend

from conftest import verdict_text


def make_checker(*verdicts):
    backend = ScriptedBackend({"textual_check": list(verdicts)})
    return TextualChecker(backend)


class TestReflect:
    def test_pass(self):
        checker = make_checker(verdict_text(True))
        verdict = checker.reflect("{}", "fragment", "motion", 1)
        assert verdict.passed and verdict.feedback == ""

    def test_fail_with_feedback(self):
        checker = make_checker(
            verdict_text(False, "no need for the light illumination"))
        verdict = checker.reflect("{}", "fragment", "decoration", 1)
        assert not verdict.passed
        assert "light illumination" in verdict.feedback

    def test_unparseable_prose_becomes_generic_fail(self):
        checker = make_checker("looks wrong to me, probably")
        verdict = checker.reflect("{}", "fragment", "action", 1)
        assert not verdict.passed
        assert verdict.feedback == GENERIC_FEEDBACK

    def test_fail_with_empty_feedback_gets_generic(self):
        checker = make_checker(verdict_text(False, ""))
        verdict = checker.reflect("{}", "fragment", "action", 2)
        assert not verdict.passed
        assert verdict.feedback == GENERIC_FEEDBACK

    def test_failed_verdict_requires_feedback(self):
        with pytest.raises(ValueError):
            CheckVerdict(passed=False, feedback="", subject="action",
                         iteration=1)


class TestCheckLoop:
    def test_pass_first_iteration(self):
        calls = []

        def produce(extra):
            calls.append(extra)
            return "output"

        checker = make_checker(verdict_text(True))
        output, trace = check_loop(produce, "frag", checker, "action", 3)
        assert output == "output"
        assert len(calls) == 1
        assert [v.passed for v in trace] == [True]

    def test_fail_then_pass_feeds_feedback(self):
        calls = []

        def produce(extra):
            calls.append(extra)
            return f"output{len(calls)}"

        checker = make_checker(verdict_text(False, "remove light"),
                               verdict_text(True))
        output, trace = check_loop(produce, "frag", checker, "decoration", 3)
        assert output == "output2"
        assert len(calls) == 2
        assert calls[0] == ""
        assert "remove light" in calls[1]
        assert [v.passed for v in trace] == [False, True]

    def test_budget_exhausted_exact_call_count(self):
        calls = []

        def produce(extra):
            calls.append(extra)
            return "bad"

        checker = make_checker(*[verdict_text(False, f"wrong {i}")
                                 for i in range(3)])
        with pytest.raises(CheckBudgetExhausted) as err:
            check_loop(produce, "frag", checker, "action", 3)
        assert len(calls) == 3
        assert len(err.value.trace) == 3
        assert err.value.output == "bad"

    def test_feedback_accumulation_monotone(self):
        prompts = []

        def produce(extra):
            prompts.append(extra)
            return "bad"

        checker = make_checker(verdict_text(False, "first"),
                               verdict_text(False, "second"),
                               verdict_text(False, "third"))
        with pytest.raises(CheckBudgetExhausted):
            check_loop(produce, "frag", checker, "action", 3)
        assert "first" in prompts[1]
        assert "first" in prompts[2] and "second" in prompts[2]

    def test_producer_error_counts_as_failed_iteration(self):
        calls = []

        def produce(extra):
            calls.append(extra)
            if len(calls) == 1:
                raise ParseError("missing required key 'assignments'", "raw")
            return "good"

        checker = make_checker(verdict_text(True))
        output, trace = check_loop(produce, "frag", checker, "action", 3)
        assert output == "good"
        assert [v.passed for v in trace] == [False, True]
        assert "assignments" in calls[1]


class _StaticCaptioner:
    def __init__(self, caption):
        self.caption = caption

    def complete(self, bundle):
        from sceneweave.gateway import RawResponse

        assert "30 words" in bundle.system_text
        return RawResponse(text=self.caption, backend_id="scripted")


class _DeadCaptioner:
    def complete(self, bundle):
        raise ConnectionError("offline")


class TestVisualReview:
    def test_identical_caption_aligned(self):
        fragment = "the red sedan crosses the line"
        review = visual_review("clip_0001.png", fragment,
                               _StaticCaptioner(fragment),
                               BagOfWordsEmbedder())
        assert review.similarity == pytest.approx(1.0)
        assert review.aligned
        assert review.guidance == ""

    def test_unrelated_caption_misaligned_with_guidance(self):
        review = visual_review(
            "clip_0002.png", "the red sedan crosses the line",
            _StaticCaptioner("an empty kitchen with plates"),
            BagOfWordsEmbedder())
        # disjoint bags: cosine 0 maps to 0.5, below the 0.6 default
        assert review.similarity == pytest.approx(0.5)
        assert not review.aligned
        assert review.guidance

    def test_captioner_offline(self):
        with pytest.raises(CaptionerUnavailable):
            visual_review("clip.png", "fragment", _DeadCaptioner(),
                          BagOfWordsEmbedder())

    def test_no_captioner(self):
        with pytest.raises(CaptionerUnavailable):
            visual_review("clip.png", "fragment", None, BagOfWordsEmbedder())
