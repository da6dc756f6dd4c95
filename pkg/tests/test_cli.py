import hashlib
import json
from pathlib import Path

import pytest

from sceneweave.cli import (
    EXIT_CONFIG,
    EXIT_EVAL,
    EXIT_OK,
    EXIT_PLAN,
    EXIT_VALIDATION,
    main,
)

from conftest import action_text, director_text, fenced, verdict_text

REPO = Path(__file__).resolve().parent.parent
RACE_DAY = REPO / "fixtures" / "race_day"


def run_cli(*argv):
    return main([str(a) for a in argv])


def write_fixtures(directory: Path, responses: dict):
    directory.mkdir(parents=True, exist_ok=True)
    for role, items in responses.items():
        for i, text in enumerate(items):
            (directory / f"{role}_{i:03d}.txt").write_text(text,
                                                           encoding="utf-8")


SIMPLE_MANIFEST = """\
title: Mini
narrative: |
  The cart rolls to the gate.
entities:
  - name: cart
    kind: character
    asset_ref: assets/cart.glb
fragments:
  - The cart rolls to the gate.
"""


class TestRun:
    def test_race_day_bundle(self, tmp_path, capsys):
        out = tmp_path / "out"
        status = run_cli("run", RACE_DAY / "manifest.yaml",
                         "--fixtures", RACE_DAY / "fixtures",
                         "--output-dir", out)
        assert status == EXIT_OK
        for name in ("plans.json", "timeline.s3a.json", "render_script.py"):
            assert (out / name).is_file()

    def test_race_day_matches_goldens(self, tmp_path):
        out = tmp_path / "out"
        run_cli("run", RACE_DAY / "manifest.yaml",
                "--fixtures", RACE_DAY / "fixtures", "--output-dir", out)
        goldens = json.loads(
            (REPO / "tests" / "goldens" / "race_day_digests.json").read_text())
        for name, expected in goldens.items():
            actual = hashlib.sha256((out / name).read_bytes()).hexdigest()
            assert actual == expected, f"{name} drifted from golden"

    def test_duplicate_entity_exits_config(self, tmp_path):
        manifest = tmp_path / "bad.yaml"
        manifest.write_text(SIMPLE_MANIFEST.replace(
            "entities:",
            "entities:\n  - name: cart\n    kind: character"),
            encoding="utf-8")
        fixtures = tmp_path / "fx"
        fixtures.mkdir()
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--output-dir", tmp_path / "out") == EXIT_CONFIG

    def test_plan_failure_exit(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")] * 3,
            "action": [action_text(("cart", "special action", "do nothing",
                                    {}))] * 3,
            "textual_check": [verdict_text(True)] +
            [verdict_text(False, "wrong")] * 3,
        })
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--output-dir", tmp_path / "out") == EXIT_PLAN

    def test_rule_segmenter_when_no_fragments(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(
            "title: T\nnarrative: |\n  Beat one.\n\n  Beat two.\n"
            "entities:\n  - {name: cart, kind: character}\n",
            encoding="utf-8")
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")] * 2,
            "action": [action_text(("cart", "special action", "do nothing",
                                    {}))] * 2,
            "textual_check": [verdict_text(True)] * 4,
        })
        out = tmp_path / "out"
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--output-dir", out) == EXIT_OK
        plans = json.loads((out / "plans.json").read_text())
        assert len(plans) == 2

    def test_visual_review_with_captions(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")] * 2,
            "action": [action_text(("cart", "special action", "do nothing",
                                    {}))] * 2,
            "textual_check": [verdict_text(True)] * 4,
        })
        captions = tmp_path / "captions.txt"
        captions.write_text("The cart rolls to the gate.\n", encoding="utf-8")
        out = tmp_path / "out"
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--captions", captions, "--output-dir", out) == EXIT_OK
        review = json.loads((out / "visual_review.json").read_text())
        assert review["rounds"][0][0]["aligned"] is True

    def test_caption_fixtures_review_path(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("cart", "special action", "do nothing",
                                    {}))],
            "textual_check": [verdict_text(True)] * 2,
            "visual_check": ["The cart rolls to the gate."],
        })
        out = tmp_path / "out"
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--caption-fixtures", "--output-dir", out) == EXIT_OK
        review = json.loads((out / "visual_review.json").read_text())
        assert review["rounds"][0][0]["aligned"] is True
        assert review["rounds"][0][0]["caption"] == \
            "The cart rolls to the gate."

    def test_captioner_offline_marks_run_unreviewed(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        fixtures = tmp_path / "fx"
        # no visual_check fixtures: the captioner is effectively offline
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("cart", "special action", "do nothing",
                                    {}))],
            "textual_check": [verdict_text(True)] * 2,
        })
        out = tmp_path / "out"
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--caption-fixtures", "--output-dir", out) == EXIT_OK
        review = json.loads((out / "visual_review.json").read_text())
        assert review["unreviewed"] is True
        assert (out / "timeline.s3a.json").is_file()

    def test_misaligned_caption_triggers_one_replan(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        fixtures = tmp_path / "fx"
        # second pass consumes the second director/action/check fixtures
        write_fixtures(fixtures, {
            "director": [director_text(True, False, False, "fast")] * 2,
            "action": [
                action_text(("cart", "special action", "do nothing", {})),
                action_text(("cart", "straight line movement",
                             "constant speed movement", {})),
            ],
            "textual_check": [verdict_text(True)] * 4,
        })
        captions = tmp_path / "captions.txt"
        captions.write_text("an empty kitchen with plates\n",
                            encoding="utf-8")
        out = tmp_path / "out"
        assert run_cli("run", manifest, "--fixtures", fixtures,
                       "--captions", captions, "--output-dir", out) == EXIT_OK
        plans = json.loads((out / "plans.json").read_text())
        assert plans[0]["actions"][0]["sub_action"] == \
            "constant speed movement"


class TestContinue:
    def _manifest(self, tmp_path):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(SIMPLE_MANIFEST, encoding="utf-8")
        return manifest

    def test_accepted_continuation(self, tmp_path):
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "continuation": [fenced({
                "reasoning": "the cart can simply return",
                "fragments": ["The cart rolls back and stops."]})],
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("cart", "straight line movement",
                                    "constant speed movement", {}))],
        })
        out = tmp_path / "out"
        status = run_cli("continue", self._manifest(tmp_path),
                         "quiet ending", "--fixtures", fixtures,
                         "--output-dir", out)
        assert status == EXIT_OK
        extended = (out / "extended_manifest.yaml").read_text()
        assert "The cart rolls back and stops." in extended
        assert (out / "continuation_reasoning.txt").read_text().strip() == \
            "the cart can simply return"

    def test_unknown_entity_rejected(self, tmp_path):
        fixtures = tmp_path / "fx"
        write_fixtures(fixtures, {
            "continuation": [fenced({
                "reasoning": "drama",
                "fragments": ["A dragon lands on the cart."]})],
            "director": [director_text(True, False, False, "fast")],
            "action": [action_text(("dragon", "special action", "do nothing",
                                    {}))],
        })
        status = run_cli("continue", self._manifest(tmp_path), "drama",
                         "--fixtures", fixtures,
                         "--output-dir", tmp_path / "out")
        assert status == EXIT_VALIDATION

    def test_empty_condition_usage_error(self, tmp_path):
        fixtures = tmp_path / "fx"
        fixtures.mkdir()
        status = run_cli("continue", self._manifest(tmp_path), "   ",
                         "--fixtures", fixtures,
                         "--output-dir", tmp_path / "out")
        assert status == EXIT_CONFIG


class TestEval:
    def _setup(self, tmp_path, captions):
        manifest = tmp_path / "m.yaml"
        manifest.write_text(
            "title: T\nnarrative: |\n  Beat one.\n\n  Beat two.\n"
            "entities:\n  - {name: cart, kind: character}\n"
            "fragments:\n  - Beat one.\n  - Beat two.\n", encoding="utf-8")
        captions_path = tmp_path / "captions.txt"
        captions_path.write_text("\n".join(captions) + "\n", encoding="utf-8")
        return manifest, captions_path

    def test_two_rows(self, tmp_path):
        manifest, captions = self._setup(tmp_path,
                                         ["Beat one.", "Beat two."])
        out = tmp_path / "out"
        fixtures = tmp_path / "fx"
        fixtures.mkdir()
        status = run_cli("eval", manifest, captions, "--fixtures", fixtures,
                         "--output-dir", out)
        assert status == EXIT_OK
        report = json.loads((out / "eval_report.json").read_text())
        assert len(report["per_fragment"]) == 2
        assert report["rouge_l"] == pytest.approx(1.0)

    def test_mismatched_counts(self, tmp_path):
        manifest, captions = self._setup(tmp_path, ["only one"])
        fixtures = tmp_path / "fx"
        fixtures.mkdir()
        status = run_cli("eval", manifest, captions, "--fixtures", fixtures,
                         "--output-dir", tmp_path / "out")
        assert status == EXIT_EVAL


class TestOtherCommands:
    def test_catalog_dump(self, capsys):
        assert run_cli("catalog") == EXIT_OK
        out = capsys.readouterr().out
        assert "action library" in out
        assert "fireworks" in out

    def test_replay_roundtrip(self, tmp_path):
        out = tmp_path / "out"
        run_cli("run", RACE_DAY / "manifest.yaml",
                "--fixtures", RACE_DAY / "fixtures", "--output-dir", out)
        replayed = tmp_path / "replayed.py"
        assert run_cli("replay", out / "timeline.s3a.json",
                       "--output", replayed) == EXIT_OK
        assert replayed.read_bytes() == (out / "render_script.py").read_bytes()
