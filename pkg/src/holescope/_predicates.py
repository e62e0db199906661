"""Filtered exact orientation kernels compiled with numba.

The planar predicate uses a floating-point fast path guarded by Shewchuk's
static error bound and falls back to exact expansion arithmetic. The 3D
predicate only reports the filtered sign; callers re-evaluate the rare
uncertain cases exactly (see ``geom.orient3d``).
"""

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps / 2.0
SPLITTER = 134217729.0  # 2^27 + 1
CCW_ERRBOUND = (3.0 + 16.0 * EPS) * EPS
O3D_ERRBOUND = (7.0 + 56.0 * EPS) * EPS


@njit(cache=True, inline="always")
def two_sum(a, b):
    x = a + b
    bv = x - a
    av = x - bv
    return x, (a - av) + (b - bv)


@njit(cache=True, inline="always")
def _split(a):
    c = SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@njit(cache=True, inline="always")
def two_product(a, b):
    x = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    err = x - ahi * bhi - alo * bhi - ahi * blo
    return x, alo * blo - err


@njit(cache=True)
def _grow(e, m, b):
    # adds b to the nonoverlapping expansion e[:m]; result has m+1 components
    q = b
    for i in range(m):
        q, h = two_sum(q, e[i])
        e[i] = h
    e[m] = q
    return m + 1


@njit(cache=True)
def orient2d_exact(ax, ay, bx, by, cx, cy):
    """Exact sign of det[[ax-cx, ay-cy], [bx-cx, by-cy]]."""
    e = np.empty(12)
    m = 0
    terms = (
        (ax, by), (bx, cy), (cx, ay),
        (-ax, cy), (-bx, ay), (-cx, by),
    )
    for u, v in terms:
        hi, lo = two_product(u, v)
        m = _grow(e, m, lo)
        m = _grow(e, m, hi)
    for i in range(m - 1, -1, -1):
        if e[i] > 0.0:
            return 1
        if e[i] < 0.0:
            return -1
    return 0


@njit(cache=True)
def orient2d(ax, ay, bx, by, cx, cy):
    """Sign of the signed area of triangle abc (+1 counterclockwise)."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = CCW_ERRBOUND * (abs(detleft) + abs(detright))
    sgn = np.int64(det > bound) - np.int64(-det > bound)
    if sgn == 0:
        return orient2d_exact(ax, ay, bx, by, cx, cy)
    return sgn


@njit(cache=True)
def orient3d_filtered(a, b, c, d):
    """Filtered sign of orient3d(a, b, c, d); 2 means "undecided".

    Sign convention: positive when d lies below the plane through a, b, c
    oriented counterclockwise when viewed from above (Shewchuk's convention).
    """
    adx = a[0] - d[0]
    bdx = b[0] - d[0]
    cdx = c[0] - d[0]
    ady = a[1] - d[1]
    bdy = b[1] - d[1]
    cdy = c[1] - d[1]
    adz = a[2] - d[2]
    bdz = b[2] - d[2]
    cdz = c[2] - d[2]
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    det = (adz * (bdxcdy - cdxbdy)
           + bdz * (cdxady - adxcdy)
           + cdz * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
                 + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
                 + (abs(adxbdy) + abs(bdxady)) * abs(cdz))
    bound = O3D_ERRBOUND * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return 2
