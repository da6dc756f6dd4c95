# cython: language_level=3
"""Compiled kernels: dense trajectory sampling and LCS length.

Must match ``_ref.py`` exactly on the same inputs: same closed forms,
double precision, same operation order.
"""

from libc.math cimport cos, sin
from libc.stdlib cimport free, malloc

BACKEND = "compiled"


def sample_linear(p0, p1, int n, bint eased):
    """n points from p0 to p1; smoothstep 3t^2-2t^3 on t when eased."""
    cdef double x0 = p0[0], y0 = p0[1], z0 = p0[2]
    cdef double x1 = p1[0], y1 = p1[1], z1 = p1[2]
    cdef double last = n - 1
    cdef double t
    cdef int i
    out = []
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


def sample_qbezier(p0, c, p1, int n):
    """Quadratic Bezier (1-t)^2 p0 + 2(1-t)t c + t^2 p1 at n uniform t."""
    cdef double x0 = p0[0], y0 = p0[1], z0 = p0[2]
    cdef double cx = c[0], cy = c[1], cz = c[2]
    cdef double x1 = p1[0], y1 = p1[1], z1 = p1[2]
    cdef double last = n - 1
    cdef double t, u, a, b, d
    cdef int i
    out = []
    for i in range(n):
        t = i / last
        u = 1.0 - t
        a = u * u
        b = 2.0 * u * t
        d = t * t
        out.append((
            a * x0 + b * cx + d * x1,
            a * y0 + b * cy + d * y1,
            a * z0 + b * cz + d * z1,
        ))
    return out


def sample_cbezier(p0, c1, c2, p1, int n):
    """Cubic Bezier with two control points at n uniform t."""
    cdef double x0 = p0[0], y0 = p0[1], z0 = p0[2]
    cdef double ax = c1[0], ay = c1[1], az = c1[2]
    cdef double bx = c2[0], by = c2[1], bz = c2[2]
    cdef double x1 = p1[0], y1 = p1[1], z1 = p1[2]
    cdef double last = n - 1
    cdef double t, u, a, b, c, d
    cdef int i
    out = []
    for i in range(n):
        t = i / last
        u = 1.0 - t
        a = u * u * u
        b = 3.0 * u * u * t
        c = 3.0 * u * t * t
        d = t * t * t
        out.append((
            a * x0 + b * ax + c * bx + d * x1,
            a * y0 + b * ay + c * by + d * y1,
            a * z0 + b * az + c * bz + d * z1,
        ))
    return out


def parabola_offsets(double height, int n):
    """Vertical arch 4*h*t*(1-t) at n uniform t; zero at both ends."""
    cdef double last = n - 1
    cdef double t
    cdef int i
    out = []
    for i in range(n):
        t = i / last
        out.append(4.0 * height * t * (1.0 - t))
    return out


def sample_arc(double cx, double cy, double z, double radius,
               double start_angle, double sweep, int n):
    """n points on a horizontal circle arc around (cx, cy) at height z."""
    cdef double last = n - 1
    cdef double a
    cdef int i
    out = []
    for i in range(n):
        a = start_angle + sweep * (i / last)
        out.append((cx + radius * cos(a), cy + radius * sin(a), z))
    return out


def lcs_length(a, b):
    """Longest-common-subsequence length via the rolling-row DP table."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(b)
    if m == 0 or n == 0:
        return 0
    cdef long *aa = <long *> malloc(m * sizeof(long))
    cdef long *bb = <long *> malloc(n * sizeof(long))
    cdef long *prev = <long *> malloc((n + 1) * sizeof(long))
    cdef long *cur = <long *> malloc((n + 1) * sizeof(long))
    if aa == NULL or bb == NULL or prev == NULL or cur == NULL:
        free(aa); free(bb); free(prev); free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef long ai, pj, cj, result
    cdef long *tmp
    try:
        for i in range(m):
            aa[i] = a[i]
        for j in range(n):
            bb[j] = b[j]
        for j in range(n + 1):
            prev[j] = 0
            cur[j] = 0
        for i in range(1, m + 1):
            ai = aa[i - 1]
            for j in range(1, n + 1):
                if ai == bb[j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    pj = prev[j]
                    cj = cur[j - 1]
                    cur[j] = pj if pj >= cj else cj
            tmp = prev
            prev = cur
            cur = tmp
        result = prev[n]
    finally:
        free(aa)
        free(bb)
        free(prev)
        free(cur)
    return result
