"""Exact k-hole counting.

``count_k_holes_fast`` is the production counter for planar sets; the
brute-force routines test subsets against the definition directly and serve
as oracles.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numba
import numpy as np

from holescope import _brute, _planar, _spatial
from holescope.geom import (
    OUTSIDE,
    DegenerateError,
    DimensionError,
    as_pointset,
    in_convex_position,
    orient_nd,
    point_in_hull,
)

K_MAX_DEFAULT = 6
K_MAX_CAP = 8
ENUMERATION_LIMIT = 64


@dataclass
class HoleCountReport:
    n: int
    dim: int
    counts: dict[int, int]
    elapsed_seconds: float = 0.0
    engine: str = field(default="fast", compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "counts": {str(k): int(v) for k, v in sorted(self.counts.items())},
            "elapsed_seconds": self.elapsed_seconds,
        }


@contextmanager
def _num_threads(threads):
    if threads is None:
        yield
        return
    old = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(old)


def _planar_arrays(ps):
    pts = as_pointset(ps).points
    if pts.shape[1] != 2:
        raise DimensionError("planar counter needs 2-dimensional points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = pts[order]
    if len(srt) > 1 and np.any(np.all(srt[1:] == srt[:-1], axis=1)):
        raise DegenerateError("point set contains duplicate points")
    return np.ascontiguousarray(srt[:, 0]), np.ascontiguousarray(srt[:, 1]), order


def count_k_holes_fast(ps, k_max: int = K_MAX_DEFAULT, threads: int | None = None) -> HoleCountReport:
    """Counts of k-holes for k = 3..k_max in a planar point set.

    Raises DegenerateError if three points are collinear.
    """
    if not 3 <= k_max <= K_MAX_CAP:
        raise ValueError(f"k_max must lie in 3..{K_MAX_CAP}")
    t0 = time.perf_counter()
    px, py, _ = _planar_arrays(ps)
    n = len(px)
    if n < 3:
        counts = {k: 0 for k in range(3, k_max + 1)}
    else:
        with _num_threads(threads):
            total, ok, _ = _planar.count_holes_sorted(px, py, k_max)
        if not ok:
            raise DegenerateError("three collinear points found")
        counts = {k: int(total[k]) for k in range(3, k_max + 1)}
    return HoleCountReport(n, 2, counts, time.perf_counter() - t0, "fast")


def count_empty_triangles_fast(ps) -> int:
    return count_k_holes_fast(ps, 3).counts[3]


def _check_k(k, d, n):
    if k < d + 1 or k > n:
        raise ValueError(f"k must lie in {d + 1}..{n}, got {k}")


def count_k_holes_bruteforce(ps, k: int, exhaustive: bool = False) -> int:
    """Number of k-holes by testing subsets against the definition.

    With ``exhaustive`` every k-subset is tested (O(C(n,k) n)); otherwise
    holes are grown one vertex at a time, which visits every hole because
    any three or more vertices of a hole again form a hole.
    """
    ps = as_pointset(ps)
    if ps.dim != 2:
        return count_k_holes_dD_bruteforce(ps, k)
    _check_k(k, 2, ps.n)
    px, py, _ = _planar_arrays(ps)
    if exhaustive:
        return int(_brute.count_exhaustive(px, py, k))
    counts, _ = _brute.holes_by_extension(px, py, k)
    return int(counts[k])


def enumerate_k_holes(ps, k: int) -> list[tuple[int, ...]]:
    """All k-holes of a small planar set, as sorted tuples of input indices."""
    ps = as_pointset(ps)
    if ps.n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration is limited to {ENUMERATION_LIMIT} points")
    if ps.dim != 2:
        raise DimensionError("enumeration is implemented for planar sets")
    _check_k(k, 2, ps.n)
    px, py, order = _planar_arrays(ps)
    _, rows = _brute.holes_by_extension(px, py, k)
    if len(rows) == 0 or rows.shape[1] < k:
        return []
    return sorted(tuple(sorted(int(order[i]) for i in row[:k])) for row in rows)


def count_empty_simplices_dD(ps) -> int:
    """Number of empty (d+1)-point simplices in R^d, d >= 3."""
    ps = as_pointset(ps)
    d, n = ps.dim, ps.n
    if d < 3:
        raise DimensionError("use the planar counters for d = 2")
    if n < d + 1:
        return 0
    if d == 3:
        masks = _spatial.exact_side_masks(ps.points)
        if masks is None:
            raise DegenerateError("four coplanar points found")
        pos, neg, off = masks
        return int(_spatial.count_empty_tetrahedra(pos, neg, off, n))
    return count_empty_simplices_reference(ps)


def _strictly_inside_simplex(pts, simplex, q) -> bool:
    # q is inside iff replacing any vertex by q keeps the orientation sign
    ref = orient_nd([pts[i] for i in simplex])
    if ref == 0:
        raise DegenerateError("affinely dependent simplex")
    for j in range(len(simplex)):
        verts = [pts[i] for i in simplex]
        verts[j] = pts[q]
        s = orient_nd(verts)
        if s == 0:
            raise DegenerateError("point on a simplex facet")
        if s != ref:
            return False
    return True


def count_empty_simplices_reference(ps) -> int:
    """Second, independent empty-simplex counter (barycentric sign tests).

    Walks subsets in reverse lexicographic order and tests other points from
    the last index down; shares only the exact orientation predicate with
    the bitmask counter.
    """
    ps = as_pointset(ps)
    pts = [tuple(p) for p in ps.points]
    n, d = ps.n, ps.dim
    total = 0
    for simplex in reversed(list(combinations(range(n), d + 1))):
        members = set(simplex)
        if not any(_strictly_inside_simplex(pts, simplex, q)
                   for q in range(n - 1, -1, -1) if q not in members):
            total += 1
    return total


def count_k_holes_dD_bruteforce(ps, k: int) -> int:
    """k-holes in R^d (d >= 3) via convex-position and emptiness tests per subset."""
    ps = as_pointset(ps)
    d, n = ps.dim, ps.n
    if d < 3:
        raise DimensionError("use count_k_holes_bruteforce for planar sets")
    _check_k(k, d, n)
    pts = ps.points
    total = 0
    for sub in combinations(range(n), k):
        verts = pts[list(sub)]
        if not in_convex_position(verts):
            continue
        members = set(sub)
        if all(point_in_hull(pts[q], verts) == OUTSIDE for q in range(n) if q not in members):
            total += 1
    return total


def count_k_holes(ps, k_min: int = 3, k_max: int = K_MAX_DEFAULT, engine: str = "fast",
                  threads: int | None = None) -> HoleCountReport:
    """Dispatching front end used by the CLI and the experiment runner."""
    ps = as_pointset(ps)
    d = ps.dim
    t0 = time.perf_counter()
    if k_min < d + 1 or k_max < k_min:
        raise ValueError(f"need {d + 1} <= k_min <= k_max")
    if d == 2 and engine == "fast":
        rep = count_k_holes_fast(ps, max(k_max, 3), threads)
        rep.counts = {k: rep.counts[k] for k in range(k_min, k_max + 1)}
        return rep
    if engine not in ("fast", "brute"):
        raise ValueError(f"unknown engine {engine!r}")
    counts = {}
    for k in range(k_min, k_max + 1):
        if k > ps.n:
            counts[k] = 0
        elif d == 2:
            counts[k] = count_k_holes_bruteforce(ps, k)
        elif k == d + 1 and engine == "fast":
            counts[k] = count_empty_simplices_dD(ps)
        else:
            counts[k] = count_k_holes_dD_bruteforce(ps, k)
    return HoleCountReport(ps.n, d, counts, time.perf_counter() - t0, engine)


def max_possible(n: int, k: int) -> int:
    return comb(n, k)
