"""Kernel selection: compiled extension when present, pure Python otherwise.

Set ``SCENEWEAVE_PURE_PYTHON=1`` to force the fallback (used by the
benchmark to compare both paths on one interpreter).
"""

from __future__ import annotations

import os

from . import _ref

if os.environ.get("SCENEWEAVE_PURE_PYTHON", "") in ("1", "true", "yes"):
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _ref

BACKEND: str = _impl.BACKEND

sample_linear = _impl.sample_linear
sample_qbezier = _impl.sample_qbezier
sample_cbezier = _impl.sample_cbezier
parabola_offsets = _impl.parabola_offsets
sample_arc = _impl.sample_arc
lcs_length = _impl.lcs_length

__all__ = [
    "BACKEND",
    "sample_linear",
    "sample_qbezier",
    "sample_cbezier",
    "parabola_offsets",
    "sample_arc",
    "lcs_length",
]
