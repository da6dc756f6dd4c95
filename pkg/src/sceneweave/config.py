"""Run configuration, resolvable from CLI flags and SCENEWEAVE_* env vars."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .agents import DurationClass
from .errors import ManifestError
from .timeline import DEFAULT_DURATION_SECONDS, DEFAULT_FPS

ENV_PREFIX = "SCENEWEAVE_"


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(ENV_PREFIX + name, default)


def parse_duration_map(text: str) -> dict[DurationClass, int]:
    """Parse 'fast=2,moderate=4,slow=6,emphasis=10' into a seconds map."""
    seconds = dict(DEFAULT_DURATION_SECONDS)
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ManifestError(f"bad duration map entry {part!r}")
        key, _, value = part.partition("=")
        try:
            seconds[DurationClass(key.strip().lower())] = int(value)
        except (ValueError, KeyError):
            raise ManifestError(f"bad duration map entry {part!r}") from None
    return seconds


@dataclass
class RunConfig:
    backend: str = "scripted"  # scripted | http
    fixtures_dir: Path | None = None
    fps: int = DEFAULT_FPS
    max_check_iters: int = 3
    tau_vis: float = 0.6
    duration_seconds: dict = field(
        default_factory=lambda: dict(DEFAULT_DURATION_SECONDS))
    output_dir: Path = Path("out")
    jobs: int = 1
    self_check: bool = True
    visual_rerun_rounds: int = 1
    segmenter: str = "rule"  # rule | llm
    guidance: str = ""
    base_url: str | None = None
    model: str | None = None
    api_key: str | None = None
    temperature: float = 0.0

    def __post_init__(self):
        if self.backend not in ("scripted", "http"):
            raise ManifestError(f"unknown backend {self.backend!r}")
        if self.backend == "scripted" and self.fixtures_dir is None:
            raise ManifestError("scripted backend requires a fixtures dir")
        if self.fps <= 0:
            raise ManifestError("fps must be positive")
        if self.max_check_iters < 1:
            raise ManifestError("max_check_iters must be >= 1")
        if not (0.0 <= self.tau_vis <= 1.0):
            raise ManifestError("tau_vis must be within [0, 1]")

    @classmethod
    def from_sources(cls, **overrides) -> "RunConfig":
        """Environment first, explicit overrides win."""
        values: dict = {}
        if _env("BACKEND"):
            values["backend"] = _env("BACKEND")
        if _env("FIXTURES_DIR"):
            values["fixtures_dir"] = Path(_env("FIXTURES_DIR"))
        if _env("FPS"):
            values["fps"] = int(_env("FPS"))
        if _env("MAX_CHECK_ITERS"):
            values["max_check_iters"] = int(_env("MAX_CHECK_ITERS"))
        if _env("TAU_VIS"):
            values["tau_vis"] = float(_env("TAU_VIS"))
        if _env("DURATION_MAP"):
            values["duration_seconds"] = parse_duration_map(_env("DURATION_MAP"))
        if _env("OUTPUT_DIR"):
            values["output_dir"] = Path(_env("OUTPUT_DIR"))
        if _env("JOBS"):
            values["jobs"] = int(_env("JOBS"))
        if _env("BASE_URL"):
            values["base_url"] = _env("BASE_URL")
        if _env("MODEL"):
            values["model"] = _env("MODEL")
        if _env("API_KEY"):
            values["api_key"] = _env("API_KEY")
        if _env("TEMPERATURE"):
            values["temperature"] = float(_env("TEMPERATURE"))
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
        return cls(**values)
