"""Convex bodies, unit-volume normalisation and uniform sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull

from holescope.geom import DimensionError, PointSet, simplex_volume

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
PLATONIC = ("tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron")
BODY_NAMES = ("triangle", "square", "disk", "ball", "simplex") + PLATONIC


class SamplingError(RuntimeError):
    """Rejection sampling did not produce enough points."""


class Rng:
    """A reproducible random stream keyed by ``(master_seed, stream_id)``.

    Backed by the counter-based Philox generator; distinct stream ids give
    statistically independent streams.
    """

    def __init__(self, master_seed: int, stream_id: int | tuple[int, ...] = 0):
        self.master_seed = int(master_seed)
        self.stream_id = stream_id
        key = stream_id if isinstance(stream_id, tuple) else (int(stream_id),)
        ss = np.random.SeedSequence(self.master_seed, spawn_key=key)
        self.generator = np.random.Generator(np.random.Philox(ss))

    def child(self, *key: int) -> "Rng":
        base = self.stream_id if isinstance(self.stream_id, tuple) else (self.stream_id,)
        return Rng(self.master_seed, tuple(base) + tuple(key))

    def __repr__(self):
        return f"Rng(master_seed={self.master_seed}, stream_id={self.stream_id!r})"


def _platonic_vertices(name: str) -> np.ndarray:
    phi = GOLDEN
    if name == "cube":
        return np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], float)
    if name == "tetrahedron":
        return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    if name == "octahedron":
        return np.array([[s * (i == j) for j in range(3)] for i in range(3) for s in (1, -1)], float)
    if name == "icosahedron":
        v = []
        for a in (-1, 1):
            for b in (-phi, phi):
                v += [[0, a, b], [a, b, 0], [b, 0, a]]
        return np.array(v, float)
    if name == "dodecahedron":
        v = [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
        for a in (-1 / phi, 1 / phi):
            for b in (-phi, phi):
                v += [[0, a, b], [a, b, 0], [b, 0, a]]
        return np.array(v, float)
    raise ValueError(f"unknown Platonic solid {name!r}")


# volume / edge^3
_PLATONIC_VOLUME_FACTOR = {
    "tetrahedron": 1.0 / (6.0 * math.sqrt(2.0)),
    "cube": 1.0,
    "octahedron": math.sqrt(2.0) / 3.0,
    "dodecahedron": (15.0 + 7.0 * math.sqrt(5.0)) / 4.0,
    "icosahedron": 5.0 * (3.0 + math.sqrt(5.0)) / 12.0,
}


def _ccw_polygon(vertices: np.ndarray) -> np.ndarray:
    hull = ConvexHull(vertices)
    if len(hull.vertices) != len(vertices):
        raise ValueError("polygon vertices must be in convex position")
    return vertices[hull.vertices]  # scipy returns 2D hulls counterclockwise


def _centroid(shape: str, verts: np.ndarray | None, dim: int) -> np.ndarray:
    if verts is None:
        return np.zeros(dim)
    if shape == "polygon":
        x, y = verts[:, 0], verts[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cr = x * yn - xn * y
        a = cr.sum() / 2.0
        return np.array([((x + xn) * cr).sum(), ((y + yn) * cr).sum()]) / (6.0 * a)
    # simplices and the centrally symmetric Platonic solids
    return verts.mean(axis=0)


@dataclass(frozen=True)
class ConvexBody:
    """A convex body: canonical geometry scaled by ``scale`` about its centroid.

    ``canonical`` holds polytope vertices (None for balls); balls have unit
    canonical radius.
    """

    shape: str
    dim: int
    canonical: np.ndarray | None = None
    scale: float = 1.0
    _equations: np.ndarray | None = field(default=None, repr=False, compare=False)
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionError("convex bodies need dimension >= 2")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.canonical is not None:
            v = np.asarray(self.canonical, dtype=np.float64)
            if v.ndim != 2 or v.shape[1] != self.dim:
                raise DimensionError("vertex array does not match dim")
            v.setflags(write=False)
            object.__setattr__(self, "canonical", v)
            eq = ConvexHull(v).equations
            object.__setattr__(self, "_equations", eq)

    @property
    def center(self) -> np.ndarray:
        return _centroid(self.shape, self.canonical, self.dim)

    @property
    def vertices(self) -> np.ndarray | None:
        if self.canonical is None:
            return None
        c = self.center
        return c + self.scale * (self.canonical - c)

    @property
    def radius(self) -> float | None:
        return self.scale if self.canonical is None else None

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return "disk" if self.shape == "ball" and self.dim == 2 else self.shape


# ---------------------------------------------------------------- constructors

def polygon(vertices) -> ConvexBody:
    v = _ccw_polygon(np.asarray(vertices, dtype=np.float64))
    return ConvexBody("polygon", 2, v)


def triangle() -> ConvexBody:
    """Equilateral triangle centred at the origin."""
    ang = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return ConvexBody("polygon", 2, np.c_[np.cos(ang), np.sin(ang)], label="triangle")


def square(side: float = 1.0) -> ConvexBody:
    h = side / 2.0
    return ConvexBody("polygon", 2, np.array([[-h, -h], [h, -h], [h, h], [-h, h]]), label="square")


def ball(dim: int = 3, radius: float = 1.0) -> ConvexBody:
    return ConvexBody("ball", dim, None, radius)


def disk(radius: float = 1.0) -> ConvexBody:
    return ball(2, radius)


def simplex(vertices=None, dim: int | None = None) -> ConvexBody:
    """A simplex from explicit vertices, or the regular simplex in ``dim``."""
    if vertices is None:
        if dim is None:
            raise ValueError("simplex needs vertices or dim")
        # regular simplex: centred standard basis of R^{d+1}, expressed in R^d
        e = np.eye(dim + 1) - 1.0 / (dim + 1)
        q, _ = np.linalg.qr(e.T)
        vertices = e @ q[:, :dim]
    v = np.asarray(vertices, dtype=np.float64)
    d = v.shape[1]
    if v.shape[0] != d + 1:
        raise ValueError("a d-simplex needs d+1 vertices")
    if simplex_volume(v) == 0.0:
        raise ValueError("degenerate simplex")
    return ConvexBody("simplex", d, v)


def platonic(name: str) -> ConvexBody:
    return ConvexBody(name, 3, _platonic_vertices(name))


def tetrahedron() -> ConvexBody:
    return platonic("tetrahedron")


def cube() -> ConvexBody:
    return platonic("cube")


def octahedron() -> ConvexBody:
    return platonic("octahedron")


def dodecahedron() -> ConvexBody:
    return platonic("dodecahedron")


def icosahedron() -> ConvexBody:
    return platonic("icosahedron")


def from_name(name: str, dim: int | None = None) -> ConvexBody:
    """Build the canonical body for a CLI name (not yet normalised)."""
    name = name.lower()
    if name == "triangle":
        body = triangle()
    elif name == "square":
        body = square()
    elif name == "disk":
        body = disk()
    elif name == "ball":
        body = ball(3 if dim is None else dim)
    elif name == "simplex":
        if dim is None:
            raise ValueError("--dim is required for body 'simplex'")
        body = simplex(dim=dim)
    elif name in PLATONIC:
        body = platonic(name)
    else:
        raise ValueError(f"unknown body {name!r}; choose from {', '.join(BODY_NAMES)}")
    if dim is not None and body.dim != dim:
        raise DimensionError(f"body {name!r} has dimension {body.dim}, not {dim}")
    return body


# ---------------------------------------------------------------- measurements

def volume(body: ConvexBody) -> float:
    """Exact d-volume from the closed form for each shape."""
    from holescope.analytic import kappa

    s, d = body.scale, body.dim
    if body.shape == "ball":
        return kappa(d) * s**d
    v = body.vertices
    if body.shape == "polygon":
        x, y = v[:, 0], v[:, 1]
        return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))
    if body.shape == "simplex":
        return simplex_volume(v)
    edge = min(np.linalg.norm(a - b) for a, b in combinations(v, 2))
    return _PLATONIC_VOLUME_FACTOR[body.shape] * edge**3


def normalize_to_unit_volume(body: ConvexBody) -> ConvexBody:
    vol = volume(body)
    if not vol > 0:
        raise ValueError("degenerate body")
    return replace(body, scale=body.scale * vol ** (-1.0 / body.dim))


def diameter(body: ConvexBody) -> float:
    if body.shape == "ball":
        return 2.0 * body.scale
    v = body.vertices
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt((diff**2).sum(-1)).max())


def contains(body: ConvexBody, p) -> bool:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (body.dim,):
        raise DimensionError(f"expected a {body.dim}-dimensional point")
    return bool(_contains_many(body, p[None, :])[0])


def _contains_many(body: ConvexBody, pts: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    if body.shape == "ball":
        r = body.scale
        return (pts**2).sum(axis=1) <= r * r * (1.0 + rel_tol)
    c = body.center
    local = c + (pts - c) / body.scale
    eq = body._equations
    return np.all(local @ eq[:, :-1].T + eq[:, -1] <= rel_tol, axis=1)


# ---------------------------------------------------------------- sampling

def _simplex_points(gen: np.random.Generator, verts: np.ndarray, n: int) -> np.ndarray:
    # normalised exponential spacings are uniform barycentric coordinates
    e = gen.standard_exponential((n, verts.shape[0]))
    lam = e / e.sum(axis=1, keepdims=True)
    return lam @ verts


def _ball_points(gen, dim, n, radius):
    g = gen.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * (radius * gen.random(n) ** (1.0 / dim))[:, None]


def _polygon_points(gen, verts, n):
    tris = np.array([[verts[0], verts[i], verts[i + 1]] for i in range(1, len(verts) - 1)])
    u, w = tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0]
    areas = 0.5 * np.abs(u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0])
    which = gen.choice(len(tris), size=n, p=areas / areas.sum())
    e = gen.standard_exponential((n, 3))
    lam = e / e.sum(axis=1, keepdims=True)
    return np.einsum("ij,ijk->ik", lam, tris[which])


def _octahedron_points(gen, verts, n):
    # eight congruent corner simplices, one per orthant
    r = np.abs(verts).max()
    corner = np.vstack([np.zeros(3), r * np.eye(3)])
    pts = _simplex_points(gen, corner, n)
    return pts * gen.choice([-1.0, 1.0], size=(n, 3))


def _rejection_points(gen, body, verts, n, budget):
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    out = []
    have = 0
    for _ in range(budget):
        cand = lo + (hi - lo) * gen.random((max(2 * (n - have), 64), body.dim))
        cand = cand[_contains_many(body, cand, rel_tol=0.0)]
        out.append(cand)
        have += len(cand)
        if have >= n:
            return np.vstack(out)[:n]
    raise SamplingError(f"rejection sampling for {body.shape} produced {have} of {n} points")


def sample_points(body: ConvexBody, n: int, rng: Rng, budget: int = 100) -> np.ndarray:
    """n i.i.d. uniform points from ``body`` as an (n, d) array (no checks)."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = rng.generator
    if body.shape == "ball":
        return _ball_points(gen, body.dim, n, body.scale)
    v = body.vertices
    if body.shape == "polygon":
        return _polygon_points(gen, v, n)
    if body.shape in ("simplex", "tetrahedron"):
        return _simplex_points(gen, v, n)
    if body.shape == "cube":
        lo, hi = v.min(axis=0), v.max(axis=0)
        return lo + (hi - lo) * gen.random((n, 3))
    if body.shape == "octahedron":
        return _octahedron_points(gen, v, n)
    return _rejection_points(gen, body, v, n, budget)


def sample_uniform(body: ConvexBody, n: int, rng: Rng, max_resamples: int = 10) -> PointSet:
    """n uniform points in general position; degenerate draws are redrawn."""
    from holescope.geom import check_general_position

    for attempt in range(max_resamples + 1):
        pts = sample_points(body, n, rng if attempt == 0 else rng.child(attempt))
        if check_general_position(pts):
            return PointSet(pts, general_position=True)
    raise SamplingError("could not draw a point set in general position")
