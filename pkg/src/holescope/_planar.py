"""Numba kernels for counting k-holes in planar point sets.

Every hole is counted once, at its lexicographically smallest vertex (the
anchor). Points to the right of the anchor are sorted counterclockwise, the
visibility graph of the resulting star-shaped polygon is built with the
queue-based scheme of Dobkin, Edelsbrunner and Overmars (an edge ``a -> b``
is exactly an empty triangle ``anchor, a, b``), and convex chains along that
graph are counted by dynamic programming. Holes are never materialised.
"""

import numpy as np
from numba import njit, prange

from holescope._predicates import orient2d

DEGENERATE = -1


@njit(cache=True)
def _before(px, py, c, u, v):
    return orient2d(px[c], py[c], px[u], py[u], px[v], py[v])


@njit(cache=True)
def _insertion_fix(px, py, c, items, lo, hi):
    # items[lo:hi] sorted counterclockwise around point c; all items lie in an
    # open half-plane of directions seen from c, so the order is total
    for i in range(lo + 1, hi):
        x = items[i]
        j = i - 1
        while j >= lo and _before(px, py, c, x, items[j]) > 0:
            items[j + 1] = items[j]
            j -= 1
        items[j + 1] = x


@njit(cache=True)
def _merge_sort(px, py, c, items, lo, hi, buf):
    n = hi - lo
    if n <= 24:
        _insertion_fix(px, py, c, items, lo, hi)
        return
    width = 24
    for s in range(lo, hi, width):
        _insertion_fix(px, py, c, items, s, min(s + width, hi))
    while width < n:
        for s in range(lo, hi, 2 * width):
            mid = min(s + width, hi)
            end = min(s + 2 * width, hi)
            i, j, k = s, mid, s
            while i < mid and j < end:
                if _before(px, py, c, items[j], items[i]) > 0:
                    buf[k] = items[j]
                    j += 1
                else:
                    buf[k] = items[i]
                    i += 1
                k += 1
            while i < mid:
                buf[k] = items[i]
                i += 1
                k += 1
            while j < end:
                buf[k] = items[j]
                j += 1
                k += 1
        for t in range(lo, hi):
            items[t] = buf[t]
        width *= 2


@njit(cache=True)
def _sort_ccw(px, py, c, items, lo, hi, buf):
    """Sort items[lo:hi] counterclockwise around c.

    Returns 0 if already sorted, 1 if a sort was needed, -1 on a collinear tie.
    """
    if hi - lo < 2:
        return 0
    ok = True
    for i in range(lo, hi - 1):
        if _before(px, py, c, items[i], items[i + 1]) <= 0:
            ok = False
            break
    if ok:
        return 0
    _merge_sort(px, py, c, items, lo, hi, buf)
    for i in range(lo, hi - 1):
        if _before(px, py, c, items[i], items[i + 1]) <= 0:
            return -1
    return 1


@njit(cache=True)
def _angular_order(px, py, a):
    """Indices a+1..n-1 sorted counterclockwise around point a (input lex-sorted)."""
    n = px.shape[0]
    m = n - a - 1
    keys = np.empty(m)
    for t in range(m):
        keys[t] = np.arctan2(py[a + 1 + t] - py[a], px[a + 1 + t] - px[a])
    order = np.argsort(keys, kind="mergesort").astype(np.int64) + (a + 1)
    # float keys are nearly right; the exact pass repairs what rounding broke
    _insertion_fix(px, py, a, order, 0, m)
    for i in range(m - 1):
        if _before(px, py, a, order[i], order[i + 1]) <= 0:
            return order, False
    return order, True


@njit(cache=True)
def _anchor_counts(px, py, a, kmax, out, stats):
    """Count holes with lexicographically smallest vertex ``a``.

    Adds to out[3..kmax]; returns False if a degenerate (collinear) triple
    was met.
    """
    s, ok = _angular_order(px, py, a)
    if not ok:
        return False
    m = s.shape[0]
    if m < 2:
        return True
    sx = np.empty(m)
    sy = np.empty(m)
    for t in range(m):
        sx[t] = px[s[t]]
        sy[t] = py[s[t]]
    # visibility graph of the star-shaped polygon a, s[0], ..., s[m-1]
    cap = 8 * m + 16
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    in_start = np.zeros(m + 1, np.int64)
    in_end = np.zeros(m + 1, np.int64)
    qhead = np.zeros(m, np.int64)
    stk = np.empty(m + 1, np.int64)
    E = 0
    for t in range(m - 1):
        j = t + 1
        in_start[j] = E
        xj = sx[j]
        yj = sy[j]
        stk[0] = t
        sp = 1
        while sp > 0:
            u = stk[sp - 1]
            h = qhead[u]
            if h < in_end[u]:
                w = src[h]
                if orient2d(sx[w], sy[w], sx[u], sy[u], xj, yj) > 0:
                    qhead[u] = h + 1
                    stk[sp] = w
                    sp += 1
                    continue
            sp -= 1
            if E == cap:
                cap *= 2
                src2 = np.empty(cap, np.int64)
                dst2 = np.empty(cap, np.int64)
                src2[:E] = src[:E]
                dst2[:E] = dst[:E]
                src, dst = src2, dst2
            src[E] = u
            dst[E] = j
            E += 1
        in_end[j] = E
        qhead[j] = in_start[j]
    out[3] += E
    if kmax < 4:
        return True
    L = kmax - 2
    # outgoing edges grouped by source, creation order kept within a group
    out_start = np.zeros(m + 1, np.int64)
    for e in range(E):
        out_start[src[e] + 1] += 1
    for v in range(m):
        out_start[v + 1] += out_start[v]
    fill = out_start[:m].copy()
    out_edges = np.empty(E, np.int64)
    for e in range(E):
        out_edges[fill[src[e]]] = e
        fill[src[e]] += 1
    f = np.zeros((E, L), np.int64)
    acc = np.zeros(L, np.int64)
    in_ids = np.empty(m, np.int64)
    out_ids = np.empty(m, np.int64)
    pos = np.empty(m, np.int64)
    buf = np.empty(m, np.int64)
    for v in range(m):
        o0, o1 = out_start[v], out_start[v + 1]
        if o1 == o0:
            continue
        i0, i1 = in_start[v], in_end[v]
        nin = i1 - i0
        nout = o1 - o0
        for t in range(nin):
            in_ids[t] = src[i0 + t]
            pos[src[i0 + t]] = i0 + t
        for t in range(nout):
            e = out_edges[o0 + t]
            out_ids[t] = dst[e]
            pos[dst[e]] = e
        # order incoming sources and outgoing targets counterclockwise around v
        r = _sort_ccw(sx, sy, v, in_ids, 0, nin, buf)
        if r < 0:
            return False
        stats[0] += r
        r = _sort_ccw(sx, sy, v, out_ids, 0, nout, buf)
        if r < 0:
            return False
        stats[1] += r
        for l in range(L):
            acc[l] = 0
        ptr = 0
        xv = sx[v]
        yv = sy[v]
        for t in range(nout):
            b = out_ids[t]
            # the chain w -> v -> b is convex iff it turns left at v
            while ptr < nin and orient2d(sx[in_ids[ptr]], sy[in_ids[ptr]],
                                         xv, yv, sx[b], sy[b]) > 0:
                ein = pos[in_ids[ptr]]
                for l in range(L):
                    acc[l] += f[ein, l]
                ptr += 1
            e = pos[b]
            f[e, 0] = 1
            for l in range(1, L):
                f[e, l] = acc[l - 1]
    for e in range(E):
        for l in range(1, L):
            out[l + 3] += f[e, l]
    return True


@njit(cache=True, parallel=True)
def count_holes_sorted(px, py, kmax):
    """Per-anchor hole counts for lexicographically sorted coordinates.

    Returns (counts[k] for k = 0..kmax, ok flag).
    """
    n = px.shape[0]
    per = np.zeros((n, kmax + 1), np.int64)
    flags = np.ones(n, np.bool_)
    stats = np.zeros((n, 2), np.int64)
    for a in prange(n):
        flags[a] = _anchor_counts(px, py, a, kmax, per[a], stats[a])
    total = np.zeros(kmax + 1, np.int64)
    ok = True
    for a in range(n):
        if not flags[a]:
            ok = False
        for k in range(kmax + 1):
            total[k] += per[a, k]
    return total, ok, stats.sum(axis=0)


@njit(cache=True)
def collinear_free(px, py):
    """True iff no three of the lexicographically sorted points are collinear."""
    n = px.shape[0]
    for a in range(n - 2):
        _, ok = _angular_order(px, py, a)
        if not ok:
            return False
    return True
