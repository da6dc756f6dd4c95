#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Both implementations are loaded directly (no env juggling) and timed on
the workloads that dominate long timelines: dense trajectory sampling and
ROUGE-L LCS tables.
"""

from __future__ import annotations

import argparse
import random
import time

from sceneweave.kernels import _ref

try:
    from sceneweave.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def workloads(n_frames: int, lcs_len: int):
    rng = random.Random(7)
    p0, c1, c2, p1 = [tuple(rng.uniform(-10, 10) for _ in range(3))
                      for _ in range(4)]
    a = [rng.randint(0, 30) for _ in range(lcs_len)]
    b = [rng.randint(0, 30) for _ in range(lcs_len)]
    return [
        ("linear eased", lambda m: m.sample_linear(p0, p1, n_frames, True)),
        ("quad bezier", lambda m: m.sample_qbezier(p0, c1, p1, n_frames)),
        ("cubic bezier", lambda m: m.sample_cbezier(p0, c1, c2, p1,
                                                    n_frames)),
        ("parabola", lambda m: m.parabola_offsets(1.5, n_frames)),
        ("circle arc", lambda m: m.sample_arc(0.0, 0.0, 0.0, 1.5, 0.0,
                                              6.283, n_frames)),
        (f"lcs {lcs_len}x{lcs_len}", lambda m: m.lcs_length(a, b)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=100_000,
                        help="samples per trajectory workload")
    parser.add_argument("--lcs", type=int, default=2_000,
                        help="token count per LCS side")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _fast is None:
        print("compiled extension not built; nothing to compare")
        return 1

    print(f"{'workload':<16} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, fn in workloads(args.frames, args.lcs):
        ref_time = timeit(lambda: fn(_ref), args.repeats)
        fast_time = timeit(lambda: fn(_fast), args.repeats)
        print(f"{name:<16} {ref_time * 1e3:>10.2f}ms {fast_time * 1e3:>10.2f}ms "
              f"{ref_time / fast_time:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
