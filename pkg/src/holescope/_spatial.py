"""Empty tetrahedra in R^3 via per-triangle side bitmasks.

For every triangle abc the points strictly on its positive side are stored as
a bitset. A tetrahedron abcd contains e in its interior iff e is on d's side of
abc, c's side of abd, b's side of acd and a's side of bcd, so emptiness is an
AND of four bitsets.
"""

from fractions import Fraction

import numpy as np
from numba import njit

from holescope._predicates import orient3d_filtered


@njit(cache=True)
def _tri_offsets(n):
    # offset of triple (a, b, b+1) in the lexicographic enumeration of triples
    off = np.zeros((n, n), np.int64)
    t = 0
    for a in range(n):
        for b in range(a + 1, n):
            off[a, b] = t
            t += n - b - 1
    return off, t


@njit(cache=True)
def side_masks(pts):
    """Bitsets of points on each side of every triangle plane.

    Returns (pos, neg, offsets, undecided) where undecided lists (a, b, c, e)
    quadruples whose filtered sign was inconclusive; their bits are unset.
    """
    n = pts.shape[0]
    W = (n + 63) // 64
    off, ntri = _tri_offsets(n)
    pos = np.zeros((ntri, W), np.uint64)
    neg = np.zeros((ntri, W), np.uint64)
    und = np.empty((16, 4), np.int64)
    nund = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                t = off[a, b] + (c - b - 1)
                for e in range(n):
                    if e == a or e == b or e == c:
                        continue
                    s = orient3d_filtered(pts[a], pts[b], pts[c], pts[e])
                    bit = np.uint64(1) << np.uint64(e & 63)
                    if s == 1:
                        pos[t, e >> 6] |= bit
                    elif s == -1:
                        neg[t, e >> 6] |= bit
                    else:
                        if nund == und.shape[0]:
                            tmp = np.empty((2 * nund, 4), np.int64)
                            tmp[:nund] = und[:nund]
                            und = tmp
                        und[nund, 0] = a
                        und[nund, 1] = b
                        und[nund, 2] = c
                        und[nund, 3] = e
                        nund += 1
    return pos, neg, off, und[:nund]


@njit(cache=True)
def _has_bit(mask, t, e):
    return (mask[t, e >> 6] >> np.uint64(e & 63)) & np.uint64(1)


@njit(cache=True)
def count_empty_tetrahedra(pos, neg, off, n):
    W = pos.shape[1]
    acc = np.empty(W, np.uint64)
    total = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                t_abc = off[a, b] + (c - b - 1)
                for d in range(c + 1, n):
                    t_abd = off[a, b] + (d - b - 1)
                    t_acd = off[a, c] + (d - c - 1)
                    t_bcd = off[b, c] + (d - c - 1)
                    m1 = pos if _has_bit(pos, t_abc, d) else neg
                    m2 = pos if _has_bit(pos, t_abd, c) else neg
                    m3 = pos if _has_bit(pos, t_acd, b) else neg
                    m4 = pos if _has_bit(pos, t_bcd, a) else neg
                    empty = True
                    for w in range(W):
                        if m1[t_abc, w] & m2[t_abd, w] & m3[t_acd, w] & m4[t_bcd, w]:
                            empty = False
                            break
                    if empty:
                        total += 1
    return total


def _exact_sign(pts, a, b, c, e):
    # same convention as the kernel: sign of det[a-e, b-e, c-e]
    rows = [[Fraction(float(x)) - Fraction(float(y)) for x, y in zip(pts[i], pts[e])]
            for i in (a, b, c)]
    (p, q, r), (s, t, u), (v, w, x) = rows
    det = p * (t * x - u * w) - q * (s * x - u * v) + r * (s * w - t * v)
    return (det > 0) - (det < 0)


def exact_side_masks(pts):
    """side_masks with undecided signs resolved exactly; None if 4 points are coplanar."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    pos, neg, off, und = side_masks(pts)
    for a, b, c, e in und:
        s = _exact_sign(pts, a, b, c, e)
        if s == 0:
            return None
        word, bit = e >> 6, np.uint64(1) << np.uint64(e & 63)
        t = off[a, b] + (c - b - 1)
        if s > 0:
            pos[t, word] |= bit
        else:
            neg[t, word] |= bit
    return pos, neg, off


def coplanar_free(pts) -> bool:
    return exact_side_masks(pts) is not None
