"""Command-line entry point.

Subcommands: run (manifest -> plan audit + timeline + render script),
continue (extend a story under a condition), eval (score captions),
catalog (dump library schemas), replay (re-emit the script from an
interchange file).

Exit codes: 0 success, 2 usage/config/manifest error, 3 plan failure,
4 compile error, 5 continuation rejected, 6 evaluation input mismatch,
7 backend unavailable / fixtures exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import catalog as cat
from .agents import Planner, plan_record
from .checks import BagOfWordsEmbedder, TextualChecker, visual_review
from .config import RunConfig, parse_duration_map
from .continuation import (
    ContinuationRequest,
    continue_story,
    extended_story,
    validate_continuation,
)
from .errors import (
    BackendUnavailable,
    CaptionerUnavailable,
    CompileError,
    FixtureExhausted,
    LengthMismatch,
    ManifestError,
    PlanFailure,
    SceneWeaveError,
    SegmentationError,
)
from .gateway import HttpBackend, PromptContext, ScriptedBackend
from .interchange import (
    FILE_EXTENSION,
    emit_timeline,
    parse_timeline,
    timeline_digest,
)
from .manifest import load_manifest, manifest_document
from .metrics import evaluate_run
from .scripting import emit_script
from .story import LlmSegmenter, RuleSegmenter, segment_story, windows_from_fragments
from .timeline import compile_timeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PLAN = 3
EXIT_COMPILE = 4
EXIT_VALIDATION = 5
EXIT_EVAL = 6
EXIT_BACKEND = 7


def _build_backend(config: RunConfig):
    if config.backend == "scripted":
        return ScriptedBackend.from_dir(config.fixtures_dir)
    return HttpBackend(base_url=config.base_url, model=config.model,
                       api_key=config.api_key,
                       temperature=config.temperature)


def _build_planner(config: RunConfig, backend, registry,
                   guidance: str = "") -> Planner:
    context = PromptContext.default()
    checker = TextualChecker(backend, context) if config.self_check else None
    return Planner(backend, registry, context=context, checker=checker,
                   max_iters=config.max_check_iters,
                   guidance=guidance or config.guidance)


def _windows(story, fragments, config: RunConfig, backend):
    if fragments:
        return windows_from_fragments(fragments, story.registry)
    if config.segmenter == "llm":
        segmenter = LlmSegmenter(backend, PromptContext.default(),
                                 fallback=True)
    else:
        segmenter = RuleSegmenter()
    return segment_story(story, segmenter)


def _plan_all(planner: Planner, windows, config: RunConfig):
    # Scripted fixtures are consumed in sequence per role; parallel window
    # workers would reorder them, so fan out only for the http backend.
    jobs = config.jobs if config.backend == "http" else 1
    if jobs <= 1:
        return [planner.plan_window(w) for w in windows]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(planner.plan_window, windows))


def _write(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, bytes):
        path.write_bytes(payload)
    else:
        path.write_text(payload, encoding="utf-8")


def _review_clips(windows, captions, config: RunConfig):
    from .checks import VisualReview, mapped_similarity

    embedder = BagOfWordsEmbedder()
    reviews = []
    for window, caption in zip(windows, captions):
        similarity = mapped_similarity(caption, window.text, embedder)
        aligned = similarity >= config.tau_vis
        guidance = ""
        if not aligned:
            guidance = (f"The rendered clip reads as: {caption!r}. It should "
                        f"depict: {window.text!r}. Adjust the dispatched "
                        "functions so the clip matches the fragment.")
        reviews.append(VisualReview(caption=caption, aligned=aligned,
                                    similarity=similarity, guidance=guidance))
    return reviews


def _caption_clips(windows, backend, config: RunConfig):
    embedder = BagOfWordsEmbedder()
    reviews = []
    for window in windows:
        image_ref = f"clip_{window.index:04d}.png"
        reviews.append(visual_review(image_ref, window.text, backend,
                                     embedder, tau_vis=config.tau_vis))
    return reviews


def cmd_run(args) -> int:
    config = _config_from_args(args)
    story, fragments = load_manifest(args.manifest)
    backend = _build_backend(config)
    windows = _windows(story, fragments, config, backend)
    planner = _build_planner(config, backend, story.registry)

    plans = _plan_all(planner, windows, config)
    plans.sort(key=lambda p: p.window.index)
    timeline = compile_timeline(plans, story.registry, fps=config.fps,
                                seconds_map=config.duration_seconds)

    out = Path(config.output_dir)
    review_rounds = []
    captions = _load_captions(args.captions) if args.captions else None
    use_captioner = config.backend == "scripted" and args.caption_fixtures

    if captions is not None and len(captions) != len(windows):
        raise LengthMismatch(f"{len(captions)} captions vs {len(windows)} "
                             "windows")

    unreviewed_reason = None
    if captions is not None or use_captioner:
        try:
            reviews = (_review_clips(windows, captions, config)
                       if captions is not None
                       else _caption_clips(windows, backend, config))
        except CaptionerUnavailable as exc:
            # degradation path: the run completes, marked unreviewed
            logger.warning("visual review skipped: %s", exc)
            unreviewed_reason = str(exc)
            reviews = []
        if reviews:
            review_rounds.append(reviews)
        misaligned = [w for w, r in zip(windows, reviews) if not r.aligned]
        if misaligned and config.visual_rerun_rounds >= 1:
            logger.info("re-planning %d misaligned window(s) with guidance",
                        len(misaligned))
            for window in misaligned:
                guidance = next(r.guidance for w, r in zip(windows, reviews)
                                if w.index == window.index)
                replanner = _build_planner(config, backend, story.registry,
                                           guidance=guidance)
                plans[window.index] = replanner.plan_window(window)
            timeline = compile_timeline(plans, story.registry, fps=config.fps,
                                        seconds_map=config.duration_seconds)
            if use_captioner:
                review_rounds.append(_caption_clips(misaligned, backend,
                                                    config))

    payload = emit_timeline(timeline)
    script = emit_script(timeline)
    _write(out / "plans.json", json.dumps([plan_record(p) for p in plans],
                                          sort_keys=True, indent=2) + "\n")
    _write(out / f"timeline{FILE_EXTENSION}", payload)
    _write(out / "render_script.py", script.text)
    if review_rounds or unreviewed_reason:
        document = {
            "tau_vis": config.tau_vis,
            "rounds": [[r.record() for r in round_] for round_ in review_rounds],
        }
        if unreviewed_reason:
            document["unreviewed"] = True
            document["reason"] = unreviewed_reason
        _write(out / "visual_review.json",
               json.dumps(document, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out / 'plans.json'}")
    print(f"wrote {out / ('timeline' + FILE_EXTENSION)} "
          f"(digest {script.timeline_digest[:12]})")
    print(f"wrote {out / 'render_script.py'}")
    if review_rounds or unreviewed_reason:
        print(f"wrote {out / 'visual_review.json'}")
    return EXIT_OK


def _load_captions(path: str) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


def cmd_continue(args) -> int:
    config = _config_from_args(args)
    story, fragments = load_manifest(args.manifest)
    if not args.condition.strip():
        raise ManifestError("continuation condition must be non-empty")
    backend = _build_backend(config)
    request = ContinuationRequest(story=story, condition=args.condition,
                                  n_fragments_hint=args.fragments_hint)
    result = continue_story(request, backend)

    # Validation dry-runs the real planning path.
    validation_planner = Planner(backend, story.registry,
                                 context=PromptContext.default(),
                                 checker=None,
                                 max_iters=config.max_check_iters)
    start_index = len(fragments) if fragments else 0
    validation = validate_continuation(result, story, validation_planner,
                                       start_index=start_index)

    out = Path(config.output_dir)
    _write(out / "continuation_reasoning.txt", result.reasoning + "\n")
    if not validation.ok:
        report = {"accepted": False, "violations": validation.violations,
                  "fragments": list(result.fragments)}
        _write(out / "continuation_report.json",
               json.dumps(report, sort_keys=True, indent=2) + "\n")
        print("continuation rejected:")
        for violation in validation.violations:
            print(f"  - {violation}")
        return EXIT_VALIDATION

    new_story = extended_story(story, result)
    new_fragments = (list(fragments) if fragments else []) + \
        list(result.fragments)
    _write(out / "extended_manifest.yaml",
           manifest_document(new_story, new_fragments))
    report = {"accepted": True, "violations": [],
              "fragments": list(result.fragments)}
    _write(out / "continuation_report.json",
           json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out / 'extended_manifest.yaml'}")
    print(f"wrote {out / 'continuation_reasoning.txt'}")
    return EXIT_OK


def cmd_eval(args) -> int:
    config = _config_from_args(args)
    story, fragments = load_manifest(args.manifest)
    captions = _load_captions(args.captions)
    if fragments:
        windows = windows_from_fragments(fragments, story.registry)
    else:
        windows = segment_story(story, RuleSegmenter())
    votes = None
    if args.votes:
        rows = json.loads(Path(args.votes).read_text(encoding="utf-8"))
        votes = rows
    report = evaluate_run(captions, windows, raters=votes,
                          embedder=BagOfWordsEmbedder())
    out = Path(config.output_dir)
    _write(out / "eval_report.json",
           json.dumps(report.record(), sort_keys=True, indent=2) + "\n")
    _write(out / "eval_report.txt", report.table_text() + "\n")
    print(report.table_text())
    return EXIT_OK


def cmd_catalog(args) -> int:
    print(cat.catalog_document())
    return EXIT_OK


def cmd_replay(args) -> int:
    payload = Path(args.timeline).read_bytes()
    timeline = parse_timeline(payload)
    script = emit_script(timeline)
    if script.timeline_digest != timeline_digest(payload):
        # Round-tripping canonical bytes must preserve the digest.
        raise SceneWeaveError("interchange file is not in canonical form")
    out_path = Path(args.output or "render_script.py")
    _write(out_path, script.text)
    print(f"wrote {out_path} (digest {script.timeline_digest[:12]})")
    return EXIT_OK


def _config_from_args(args) -> RunConfig:
    overrides = {
        "backend": getattr(args, "backend", None),
        "fixtures_dir": Path(args.fixtures) if getattr(args, "fixtures", None)
        else None,
        "fps": getattr(args, "fps", None),
        "max_check_iters": getattr(args, "max_check_iters", None),
        "tau_vis": getattr(args, "tau_vis", None),
        "output_dir": Path(args.output_dir) if getattr(args, "output_dir",
                                                       None) else None,
        "jobs": getattr(args, "jobs", None),
        "segmenter": getattr(args, "segmenter", None),
        "guidance": getattr(args, "guidance", None),
        "base_url": getattr(args, "base_url", None),
        "model": getattr(args, "model", None),
        "temperature": getattr(args, "temperature", None),
    }
    if getattr(args, "no_check", False):
        overrides["self_check"] = False
    if getattr(args, "duration_map", None):
        overrides["duration_seconds"] = parse_duration_map(args.duration_map)
    return RunConfig.from_sources(**overrides)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=["scripted", "http"],
                        help="chat backend (default scripted)")
    parser.add_argument("--fixtures", help="fixture directory for the "
                        "scripted backend")
    parser.add_argument("--output-dir", help="artifact directory "
                        "(default ./out)")
    parser.add_argument("--fps", type=int, help="frames per second")
    parser.add_argument("--max-check-iters", type=int, dest="max_check_iters",
                        help="textual self-check budget per agent")
    parser.add_argument("--tau-vis", type=float, dest="tau_vis",
                        help="visual alignment threshold")
    parser.add_argument("--duration-map", dest="duration_map",
                        help="e.g. fast=2,moderate=4,slow=6,emphasis=10")
    parser.add_argument("--base-url", dest="base_url",
                        help="http backend base URL")
    parser.add_argument("--model", help="http backend model name")
    parser.add_argument("--temperature", type=float,
                        help="http backend sampling temperature (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sceneweave",
        description="Turn a story manifest into a frame-accurate scene "
                    "timeline and render script.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="plan, compile and emit artifacts")
    run.add_argument("manifest")
    run.add_argument("--jobs", type=int, help="parallel window planning "
                     "(http backend only)")
    run.add_argument("--no-check", action="store_true",
                     help="disable the textual self-check loop")
    run.add_argument("--segmenter", choices=["rule", "llm"],
                     help="segmentation strategy when the manifest has no "
                     "fragments")
    run.add_argument("--captions", help="pre-captioned clips (one per line) "
                     "for visual review")
    run.add_argument("--caption-fixtures", action="store_true",
                     help="caption clips through the backend's visual_check "
                     "fixtures")
    run.add_argument("--guidance", help="human visual feedback applied to "
                     "every agent prompt")
    _add_common(run)
    run.set_defaults(func=cmd_run)

    cont = sub.add_parser("continue", help="extend the story under a "
                          "condition")
    cont.add_argument("manifest")
    cont.add_argument("condition")
    cont.add_argument("--fragments-hint", type=int, dest="fragments_hint")
    _add_common(cont)
    cont.set_defaults(func=cmd_continue)

    ev = sub.add_parser("eval", help="score clip captions against the story")
    ev.add_argument("manifest")
    ev.add_argument("captions")
    ev.add_argument("--votes", help="JSON file with per-fragment rater votes")
    _add_common(ev)
    ev.set_defaults(func=cmd_eval)

    catalog_cmd = sub.add_parser("catalog", help="dump the function library "
                                 "schemas")
    catalog_cmd.set_defaults(func=cmd_catalog)

    replay = sub.add_parser("replay", help="re-emit the render script from "
                            "an interchange file")
    replay.add_argument("timeline")
    replay.add_argument("--output")
    replay.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ManifestError, SegmentationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlanFailure as exc:
        print(f"plan failure: {exc}", file=sys.stderr)
        return EXIT_PLAN
    except CompileError as exc:
        print(f"compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    except LengthMismatch as exc:
        print(f"evaluation input mismatch: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except (BackendUnavailable, FixtureExhausted, CaptionerUnavailable) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except SceneWeaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
