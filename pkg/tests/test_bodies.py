import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull
from scipy.stats import chi2

from holescope import bodies as B
from holescope.bodies import Rng, normalize_to_unit_volume, sample_points, sample_uniform
from holescope.geom import DimensionError, check_general_position

ALL = ["triangle", "square", "disk", "ball", "tetrahedron", "cube", "octahedron",
       "dodecahedron", "icosahedron"]


def test_volume_examples():
    assert B.volume(B.square()) == pytest.approx(1.0)
    assert B.volume(B.ball(3)) == pytest.approx(4 * math.pi / 3)
    tet = B.tetrahedron()
    a = B.diameter(tet)
    assert B.volume(tet) == pytest.approx(a**3 / (6 * math.sqrt(2)), rel=1e-12)


@pytest.mark.parametrize("name", ALL)
def test_volume_matches_convex_hull(name):
    body = B.from_name(name)
    if body.shape == "ball":
        pytest.skip("no vertices")
    assert B.volume(body) == pytest.approx(ConvexHull(body.vertices).volume, rel=1e-12)


@pytest.mark.parametrize("name", ALL + ["simplex4"])
def test_normalize(name):
    body = B.simplex(dim=4) if name == "simplex4" else B.from_name(name)
    unit = normalize_to_unit_volume(body)
    assert B.volume(unit) == pytest.approx(1.0, rel=1e-12)
    assert np.allclose(unit.center, body.center)


def test_normalize_examples():
    assert B.diameter(normalize_to_unit_volume(B.square(2.0))) == pytest.approx(math.sqrt(2))
    assert normalize_to_unit_volume(B.disk()).radius == pytest.approx(1 / math.sqrt(math.pi))
    assert normalize_to_unit_volume(B.ball(3)).radius == pytest.approx((3 / (4 * math.pi)) ** (1 / 3))


def test_diameter():
    assert B.diameter(B.square()) == pytest.approx(math.sqrt(2))
    assert B.diameter(B.disk(2.5)) == 5.0


def test_contains():
    assert B.contains(normalize_to_unit_volume(B.ball(3)), np.zeros(3))
    sq = B.square()
    assert not B.contains(sq, (10, 10))
    for name in ["tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"]:
        body = B.from_name(name)
        assert B.contains(body, body.center)
        far = body.center + 2 * np.abs(body.vertices - body.center).max() * np.ones(3)
        assert not B.contains(body, far)
    with pytest.raises(DimensionError):
        B.contains(sq, (0, 0, 0))


def test_from_name_errors():
    with pytest.raises(ValueError):
        B.from_name("blob")
    with pytest.raises(ValueError):
        B.from_name("simplex")
    with pytest.raises(DimensionError):
        B.from_name("square", 3)


@pytest.mark.parametrize("name", ALL)
def test_samples_inside_and_deterministic(name):
    body = normalize_to_unit_volume(B.from_name(name))
    pts = sample_points(body, 2000, Rng(1, 2))
    assert pts.shape == (2000, body.dim)
    assert B._contains_many(body, pts).all()
    assert np.array_equal(pts, sample_points(body, 2000, Rng(1, 2)))
    assert not np.array_equal(pts, sample_points(body, 2000, Rng(1, 3)))


@pytest.mark.parametrize("name", ALL)
def test_sample_mean_is_centroid(name):
    body = normalize_to_unit_volume(B.from_name(name))
    pts = sample_points(body, 10**6, Rng(4, 0))
    se = pts.std(axis=0) / math.sqrt(len(pts))
    assert np.all(np.abs(pts.mean(axis=0) - body.center) < 5 * se)


def test_square_chi_square_uniformity():
    body = normalize_to_unit_volume(B.square())
    pts = sample_uniform(body, 1000, Rng(9, 0)).points
    cells = np.floor((pts + 0.5) * 10).astype(int).clip(0, 9)
    counts = np.bincount(cells[:, 0] * 10 + cells[:, 1], minlength=100)
    stat = ((counts - 10.0) ** 2 / 10.0).sum()
    assert stat < chi2.ppf(1 - 1e-4, 99)
    quadrants = np.bincount((pts[:, 0] > 0) * 2 + (pts[:, 1] > 0), minlength=4)
    assert np.all(np.abs(quadrants - 250) < 4 * math.sqrt(1000 * 0.25 * 0.75))


def test_polytope_uniformity_by_region():
    # fraction of points in the inner half-scale copy must be 2^-d
    for name in ["triangle", "tetrahedron", "octahedron", "icosahedron"]:
        body = normalize_to_unit_volume(B.from_name(name))
        pts = sample_points(body, 200_000, Rng(6, 1))
        inner = B.normalize_to_unit_volume(body)
        inner = B.ConvexBody(inner.shape, inner.dim, inner.canonical, inner.scale / 2)
        frac = B._contains_many(inner, pts).mean()
        p = 0.5**body.dim
        assert abs(frac - p) < 5 * math.sqrt(p * (1 - p) / len(pts))


def test_sample_uniform_small():
    ps = sample_uniform(normalize_to_unit_volume(B.disk()), 2, Rng(0, 0))
    assert ps.n == 2 and not np.array_equal(ps.points[0], ps.points[1])
    assert check_general_position(ps.points)


def test_rng_children_are_independent_streams():
    a = Rng(5, 1).child(2).generator.random(4)
    b = Rng(5, (1, 2)).generator.random(4)
    c = Rng(5, (1, 3)).generator.random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
