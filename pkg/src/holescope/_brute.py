"""Definition-level k-hole tests for planar point sets (numba).

These kernels share nothing with the visibility-graph counter except the
orientation predicate: a k-subset is a hole iff its hull has k vertices and
no other point lies strictly inside.
"""

import numpy as np
from numba import njit

from holescope._predicates import orient2d


@njit(cache=True)
def _hull_size(px, py, idx, k, hull):
    # gift wrapping on the k chosen points; collinear points are not vertices
    start = idx[0]
    for t in range(1, k):
        i = idx[t]
        if px[i] < px[start] or (px[i] == px[start] and py[i] < py[start]):
            start = i
    h = 0
    cur = start
    while True:
        hull[h] = cur
        h += 1
        if h > k:
            return -1
        cand = idx[0] if idx[0] != cur else idx[1]
        for t in range(k):
            q = idx[t]
            if q == cur or q == cand:
                continue
            o = orient2d(px[cur], py[cur], px[cand], py[cand], px[q], py[q])
            if o < 0:
                cand = q
            elif o == 0:
                # keep the farther point so collinear middles are skipped
                d1 = (px[cand] - px[cur]) ** 2 + (py[cand] - py[cur]) ** 2
                d2 = (px[q] - px[cur]) ** 2 + (py[q] - py[cur]) ** 2
                if d2 > d1:
                    cand = q
        cur = cand
        if cur == start:
            return h


@njit(cache=True)
def is_hole(px, py, idx, k, hull):
    """True iff the points idx[:k] are in convex position with empty interior."""
    if _hull_size(px, py, idx, k, hull) != k:
        return False
    n = px.shape[0]
    for q in range(n):
        member = False
        for t in range(k):
            if idx[t] == q:
                member = True
                break
        if member:
            continue
        inside = True
        for t in range(k):
            a = hull[t]
            b = hull[(t + 1) % k]
            if orient2d(px[a], py[a], px[b], py[b], px[q], py[q]) <= 0:
                inside = False
                break
        if inside:
            return False
    return True


@njit(cache=True)
def count_exhaustive(px, py, k):
    """Number of k-holes by testing every k-subset."""
    n = px.shape[0]
    idx = np.arange(k).astype(np.int64)
    hull = np.empty(k + 1, np.int64)
    total = 0
    while True:
        if is_hole(px, py, idx, k, hull):
            total += 1
        t = k - 1
        while t >= 0 and idx[t] == n - k + t:
            t -= 1
        if t < 0:
            break
        idx[t] += 1
        for u in range(t + 1, k):
            idx[u] = idx[u - 1] + 1
    return total


@njit(cache=True)
def holes_by_extension(px, py, kmax):
    """All j-holes for j = 3..kmax by extending (j-1)-holes with a larger index.

    Every subset of at least three vertices of a hole is again a hole, so
    growing index-sorted subsets one point at a time and discarding non-holes
    still visits every hole exactly once.
    """
    n = px.shape[0]
    counts = np.zeros(kmax + 1, np.int64)
    hull = np.empty(kmax + 1, np.int64)
    idx = np.empty(kmax, np.int64)
    # level 3 seed
    cap = 1024
    cur = np.empty((cap, kmax), np.int64)
    m = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                idx[0], idx[1], idx[2] = a, b, c
                if is_hole(px, py, idx, 3, hull):
                    if m == cap:
                        cap *= 2
                        nxt = np.empty((cap, kmax), np.int64)
                        nxt[:m] = cur[:m]
                        cur = nxt
                    cur[m, :3] = idx[:3]
                    m += 1
    counts[3] = m
    for j in range(4, kmax + 1):
        cap2 = max(1024, m)
        nxt = np.empty((cap2, kmax), np.int64)
        m2 = 0
        for r in range(m):
            for t in range(j - 1):
                idx[t] = cur[r, t]
            for v in range(cur[r, j - 2] + 1, n):
                idx[j - 1] = v
                if is_hole(px, py, idx, j, hull):
                    if m2 == cap2:
                        cap2 *= 2
                        tmp = np.empty((cap2, kmax), np.int64)
                        tmp[:m2] = nxt[:m2]
                        nxt = tmp
                    nxt[m2, :j] = idx[:j]
                    m2 += 1
        cur = nxt
        m = m2
        counts[j] = m
        if m == 0:
            break
    return counts, cur[:m, :kmax]
