"""Pure-Python kernels: dense trajectory sampling and LCS length.

Semantics here are the contract; the compiled module in ``_fast.pyx`` must
agree bit-for-bit on the same inputs (both evaluate the same closed forms
in double precision, in the same operation order).
"""

from __future__ import annotations

import math

BACKEND = "python"

Vec3 = tuple[float, float, float]


def sample_linear(p0: Vec3, p1: Vec3, n: int, eased: bool) -> list[Vec3]:
    """n points from p0 to p1; smoothstep 3t^2-2t^3 on t when eased."""
    x0, y0, z0 = p0
    x1, y1, z1 = p1
    out = []
    last = n - 1
    for i in range(n):
        t = i / last
        if eased:
            t = t * t * (3.0 - 2.0 * t)
        out.append((
            x0 + (x1 - x0) * t,
            y0 + (y1 - y0) * t,
            z0 + (z1 - z0) * t,
        ))
    return out


def sample_qbezier(p0: Vec3, c: Vec3, p1: Vec3, n: int) -> list[Vec3]:
    """Quadratic Bezier (1-t)^2 p0 + 2(1-t)t c + t^2 p1 at n uniform t."""
    out = []
    last = n - 1
    for i in range(n):
        t = i / last
        u = 1.0 - t
        a = u * u
        b = 2.0 * u * t
        d = t * t
        out.append((
            a * p0[0] + b * c[0] + d * p1[0],
            a * p0[1] + b * c[1] + d * p1[1],
            a * p0[2] + b * c[2] + d * p1[2],
        ))
    return out


def sample_cbezier(p0: Vec3, c1: Vec3, c2: Vec3, p1: Vec3, n: int) -> list[Vec3]:
    """Cubic Bezier with two control points at n uniform t."""
    out = []
    last = n - 1
    for i in range(n):
        t = i / last
        u = 1.0 - t
        a = u * u * u
        b = 3.0 * u * u * t
        c = 3.0 * u * t * t
        d = t * t * t
        out.append((
            a * p0[0] + b * c1[0] + c * c2[0] + d * p1[0],
            a * p0[1] + b * c1[1] + c * c2[1] + d * p1[1],
            a * p0[2] + b * c1[2] + c * c2[2] + d * p1[2],
        ))
    return out


def parabola_offsets(height: float, n: int) -> list[float]:
    """Vertical arch 4*h*t*(1-t) at n uniform t; zero at both ends."""
    out = []
    last = n - 1
    for i in range(n):
        t = i / last
        out.append(4.0 * height * t * (1.0 - t))
    return out


def sample_arc(
    cx: float, cy: float, z: float, radius: float,
    start_angle: float, sweep: float, n: int,
) -> list[Vec3]:
    """n points on a horizontal circle arc around (cx, cy) at height z."""
    out = []
    last = n - 1
    for i in range(n):
        a = start_angle + sweep * (i / last)
        out.append((cx + radius * math.cos(a), cy + radius * math.sin(a), z))
    return out


def lcs_length(a, b) -> int:
    """Longest-common-subsequence length via the rolling-row DP table."""
    m = len(a)
    n = len(b)
    if m == 0 or n == 0:
        return 0
    prev = [0] * (n + 1)
    cur = [0] * (n + 1)
    for i in range(1, m + 1):
        ai = a[i - 1]
        for j in range(1, n + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev, cur = cur, prev
    return prev[n]
