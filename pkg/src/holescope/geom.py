"""Exact geometric predicates, hulls and simplex volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from holescope._predicates import orient2d as _orient2d_kernel
from holescope._predicates import orient3d_filtered as _orient3d_kernel

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class DimensionError(ValueError):
    """Inputs do not share the expected dimension."""


class DegenerateError(ValueError):
    """A point set violates general position."""


@dataclass(frozen=True)
class PointSet:
    """An ``(n, d)`` array of points.

    ``general_position`` records that the set has been checked; it is not
    verified on construction.
    """

    points: np.ndarray
    general_position: bool = field(default=False, compare=False)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise DimensionError("points must be a 2D array of shape (n, d)")
        if pts.shape[1] < 2:
            raise DimensionError("points need dimension d >= 2")
        if pts.shape[0] and not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __len__(self):
        return self.points.shape[0]


def as_pointset(ps) -> PointSet:
    if isinstance(ps, PointSet):
        return ps
    return PointSet(np.asarray(ps, dtype=np.float64))


def _coords(p, dim=None) -> tuple[float, ...]:
    c = tuple(float(x) for x in p)
    if dim is not None and len(c) != dim:
        raise DimensionError(f"expected a {dim}-dimensional point, got {len(c)}")
    return c


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    # Bareiss-free Gaussian elimination over the rationals
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def _rank_fraction(rows: list[list[Fraction]]) -> int:
    a = [list(r) for r in rows]
    if not a:
        return 0
    rank, ncols = 0, len(a[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                for c in range(col, ncols):
                    a[r][c] -= f * a[rank][c]
        rank += 1
    return rank


def orientation(p, q, r) -> int:
    """Sign of the signed area of triangle ``pqr``: +1 CCW, -1 CW, 0 collinear.

    The decision is exact for any finite double coordinates.
    """
    a, b, c = _coords(p, 2), _coords(q, 2), _coords(r, 2)
    return int(_orient2d_kernel(a[0], a[1], b[0], b[1], c[0], c[1]))


def orient3d(a, b, c, d) -> int:
    """Exact sign of det[b-a, c-a, d-a] (right-handed positive)."""
    a, b, c, d = (_coords(x, 3) for x in (a, b, c, d))
    # kernel convention: positive when d is below plane abc, i.e. det[a-d, b-d, c-d]
    s = int(_orient3d_kernel(np.array(a), np.array(b), np.array(c), np.array(d)))
    if s == 2:
        s = orient_nd([a, b, c, d], exact=True)
        return s
    return -s


def orient_nd(points: Sequence, exact: bool = False) -> int:
    """Exact sign of det[p1-p0, ..., pd-p0] for d+1 points in R^d."""
    pts = [_coords(p) for p in points]
    d = len(pts) - 1
    if any(len(p) != d for p in pts):
        raise DimensionError(f"need {d + 1} points of dimension {d}")
    if d == 2 and not exact:
        return orientation(*pts)
    if d == 3 and not exact:
        return orient3d(*pts)
    base = [Fraction(x) for x in pts[0]]
    rows = [[Fraction(x) - b for x, b in zip(p, base)] for p in pts[1:]]
    return _sign(_det_fraction(rows))


def affine_rank(points: Sequence) -> int:
    """Exact dimension of the affine hull of ``points``."""
    pts = [[Fraction(x) for x in _coords(p)] for p in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return _rank_fraction([[x - b for x, b in zip(p, base)] for p in pts[1:]])


def simplex_volume(vertices) -> float:
    """q-dimensional volume of the simplex spanned by q+1 points in R^d."""
    v = np.asarray(vertices, dtype=np.float64)
    if v.ndim != 2:
        raise DimensionError("vertices must be an array of shape (q+1, d)")
    q, d = v.shape[0] - 1, v.shape[1]
    if q > d:
        raise DimensionError(f"{q + 1} vertices cannot span a simplex in R^{d}")
    if q <= 0:
        return 0.0
    if q == d:
        if orient_nd(v) == 0:
            return 0.0
        return abs(float(np.linalg.det(v[1:] - v[0]))) / math.factorial(d)
    if affine_rank(v) < q:
        return 0.0
    e = v[1:] - v[0]
    gram = e @ e.T
    return math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(q)


def convex_hull_2d(ps) -> np.ndarray:
    """Vertices of the planar convex hull in counterclockwise order.

    Monotone chain with exact orientation tests; collinear boundary points are
    not reported as vertices. Starts at the lexicographically smallest point.
    """
    pts = as_pointset(ps).points
    if pts.shape[1] != 2:
        raise DimensionError("convex_hull_2d needs planar points")
    if pts.shape[0] < 3:
        raise ValueError("convex hull needs at least 3 points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    uniq = [tuple(pts[i]) for i in order]
    uniq = [p for i, p in enumerate(uniq) if i == 0 or p != uniq[i - 1]]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(uniq)
    upper = chain(reversed(uniq))
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=np.float64).reshape(-1, 2)


def _facets(verts: list[tuple[float, ...]]):
    """Yield (facet, inner_sign) for every hull facet of full-dimensional ``verts``."""
    d = len(verts[0])
    for facet in combinations(range(len(verts)), d):
        fpts = [verts[i] for i in facet]
        side = 0
        ok = True
        for j, v in enumerate(verts):
            if j in facet:
                continue
            s = orient_nd(fpts + [v])
            if s == 0:
                continue
            if side == 0:
                side = s
            elif s != side:
                ok = False
                break
        if ok and side != 0:
            yield fpts, side


def point_in_hull(p, vertices) -> str:
    """Classify ``p`` against ``conv(vertices)``: inside, boundary or outside."""
    verts = [_coords(v) for v in vertices]
    if not verts:
        raise ValueError("empty vertex list")
    d = len(verts[0])
    pt = _coords(p, d)
    if any(len(v) != d for v in verts):
        raise DimensionError("vertices have mixed dimensions")
    if pt in verts:
        return BOUNDARY
    if affine_rank(verts) < d:
        return BOUNDARY if _in_lowdim_hull(pt, verts) else OUTSIDE
    if d == 2:
        hull = [tuple(h) for h in convex_hull_2d(np.array(verts))]
        signs = [orientation(hull[i], hull[(i + 1) % len(hull)], pt) for i in range(len(hull))]
        if any(s < 0 for s in signs):
            return OUTSIDE
        return INSIDE if all(s > 0 for s in signs) else BOUNDARY
    on_plane = False
    for fpts, side in _facets(verts):
        s = orient_nd(fpts + [pt])
        if s == -side:
            return OUTSIDE
        if s == 0:
            on_plane = True
    return BOUNDARY if on_plane else INSIDE


def _in_lowdim_hull(pt, verts) -> bool:
    # closed hull membership when conv(verts) has empty interior; exact LP-free
    # test via Caratheodory over affinely independent subsets
    fp = [Fraction(x) for x in pt]
    fv = [[Fraction(x) for x in v] for v in verts]
    r = affine_rank(verts)
    for sub in combinations(range(len(fv)), r + 1):
        base = fv[sub[0]]
        e = [[x - b for x, b in zip(fv[i], base)] for i in sub[1:]]
        if _rank_fraction(e) < r:
            continue
        rhs = [x - b for x, b in zip(fp, base)]
        if _rank_fraction(e + [rhs]) > r:
            return False
        # solve Gram system for barycentric coordinates
        g = [[sum(a * b for a, b in zip(u, w)) for w in e] for u in e]
        c = [sum(a * b for a, b in zip(u, rhs)) for u in e]
        lam = _solve_fraction(g, c)
        if all(x >= 0 for x in lam) and sum(lam) <= 1:
            return True
    return False


def _solve_fraction(a, b):
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


def in_convex_position(points) -> bool:
    """True iff every point is a vertex of the convex hull of the set."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionError("points must have shape (n, d)")
    n, d = pts.shape
    if n <= d + 1:
        return affine_rank(pts) == n - 1 if n else True
    if d == 2:
        return len(convex_hull_2d(pts)) == n
    for i in range(n):
        others = np.delete(pts, i, axis=0)
        if point_in_hull(pts[i], others) != OUTSIDE:
            return False
    return True


def check_general_position(ps) -> bool:
    """True iff the points are distinct and no d+1 of them are affinely dependent."""
    pts = as_pointset(ps).points
    n, d = pts.shape
    if n == 0:
        return True
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    if n > 1 and np.any(np.all(srt[1:] == srt[:-1], axis=1)):
        return False
    if n <= d:
        return affine_rank(pts) == n - 1
    if d == 2:
        from holescope._planar import collinear_free
        return bool(collinear_free(srt[:, 0].copy(), srt[:, 1].copy()))
    if d == 3:
        from holescope._spatial import coplanar_free
        return coplanar_free(srt)
    return all(orient_nd(pts[list(c)]) != 0 for c in combinations(range(n), d + 1))
