import math

import numpy as np
import pytest

from holescope import analytic as A


def test_kappa_omega():
    assert A.kappa(2) == pytest.approx(math.pi, rel=1e-15)
    assert A.kappa(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert A.kappa(4) == pytest.approx(math.pi**2 / 2, rel=1e-15)
    assert A.omega(1) == 2.0
    assert A.omega(2) == pytest.approx(2 * math.pi)
    assert A.omega(3) == pytest.approx(4 * math.pi)
    for d in range(1, 21):
        assert A.kappa(d) == pytest.approx(math.pi ** (d / 2) / math.gamma(d / 2 + 1), rel=1e-13)
        assert A.omega(d) == pytest.approx(d * A.kappa(d), rel=1e-13)


def test_cap_volume_examples():
    assert A.cap_volume_exact(2, 1.0) == pytest.approx(math.pi / 2)
    assert A.cap_volume_exact(3, 1.0) == pytest.approx(2 * math.pi / 3)
    assert A.cap_volume_exact(2, 0.5) == pytest.approx(math.acos(0.5) - 0.5 * math.sqrt(0.75))
    assert A.cap_volume_lower_bound(2, 1.0) == pytest.approx(math.pi / 4)
    assert A.cap_volume_lower_bound(3, 0.5) == pytest.approx(0.75 * (1 / 12) * 4 * math.pi / 3)


def test_cap_volume_lower_bound_sweep():
    for d in range(2, 7):
        for h in np.arange(1, 101) / 100:
            exact = A.cap_volume_exact(d, h)
            assert A.cap_volume_lower_bound(d, h) < exact
            assert exact == pytest.approx(A.cap_volume_beta(d, h), rel=1e-10, abs=1e-15)


def test_cap_area():
    assert A.cap_area_upper_bound(2, 0.25) == pytest.approx(4 * math.pi)
    assert A.cap_area_upper_bound(3, 1 / 16) == pytest.approx(4 * math.pi)
    for d in range(2, 7):
        for h in np.arange(1, 26) / 100:
            area = A.cap_area_exact(d, h)
            assert area == pytest.approx(A.cap_area_beta(d, h), rel=1e-10, abs=1e-15)
            assert area <= A.cap_area_upper_bound(d, h)
    with pytest.raises(ValueError):
        A.cap_area_upper_bound(3, 0.3)


def test_cap_spec():
    cap = A.CapSpec(3, 0.2, [0, 0, 1])
    assert cap.contains([0, 0, 0.9]) and not cap.contains([0, 0, 0.5])
    with pytest.raises(ValueError):
        A.CapSpec(3, 0.2, [0, 0, 2])
    with pytest.raises(ValueError):
        A.CapSpec(3, 1.5, [0, 0, 1])


def check_separation(d, k, h, seeds, centers):
    assert len(centers) == k - d
    if len(centers):
        np.testing.assert_allclose(np.linalg.norm(centers, axis=1), 1.0, atol=1e-12)
    for i in range(len(centers)):
        for j in range(i):
            assert np.linalg.norm(centers[i] - centers[j]) > 2 * math.sqrt(2 * h)
        for s in seeds:
            assert np.linalg.norm(centers[i] - s) > math.sqrt(2 * h)


def random_seeds(d, rng):
    s = rng.standard_normal((d, d))
    return s / np.linalg.norm(s, axis=1, keepdims=True)


def test_greedy_cap_examples():
    assert A.greedy_cap_placement(2, 2, 0.003, [[1, 0], [0, 1]]).shape == (0, 2)
    one = A.greedy_cap_placement(2, 3, 1 / 576, [[1, 0], [0, 1]])
    check_separation(2, 3, 1 / 576, np.eye(2), one)
    h = 1 / (64 * 6)
    seeds = np.eye(3)
    three = A.greedy_cap_placement(3, 6, h, seeds)
    check_separation(3, 6, h, seeds, three)


@pytest.mark.parametrize("d", [2, 3])
def test_greedy_cap_invariants(d):
    rng = np.random.default_rng(d)
    for k in range(d, 11):
        h = A.max_greedy_height(d, k)
        seeds = random_seeds(d, rng)
        check_separation(d, k, h, seeds, A.greedy_cap_placement(d, k, h, seeds, rng))


def test_greedy_cap_rejects_large_h():
    with pytest.raises(ValueError):
        A.greedy_cap_placement(2, 5, 0.1, [[1, 0], [0, 1]])


def test_planar_constants():
    assert A.planar_constant(3) == 2.0
    assert A.planar_constant(4) == pytest.approx(10 - 2 * math.pi**2 / 3, abs=1e-12)
    assert A.planar_constant(5) is None


def test_empty_simplex_bounds():
    b = A.empty_simplex_bounds(2, 1.0)
    assert b.lower == b.upper == 2.0
    b = A.empty_simplex_bounds(3, 1 / 3)
    assert b.lower == pytest.approx(3.0)
    assert b.upper == pytest.approx(12 * math.pi**2 / 35, rel=1e-13)
    assert b.upper == pytest.approx(3.38386, abs=1e-5)


def test_holes_upper_bound():
    n = 500
    assert A.holes_upper_bound(2, 3, n) == pytest.approx(2 * n * (n - 1))
    assert A.holes_upper_bound(3, 4, 100) == pytest.approx(4 * 100 * 99 * 98)
    for d, k in [(2, 4), (2, 6), (3, 5)]:
        v = A.holes_upper_bound(d, k, 50)
        assert 0 < v < math.inf


def test_blaschke_and_diameter():
    lo, hi = A.blaschke_bounds()
    assert lo == pytest.approx(0.29552, abs=1e-5) and hi == 1 / 3
    assert A.sylvester_diameter_bound(2, 1, 1) == 2
    assert A.sylvester_diameter_bound(2, math.sqrt(2), 1) == pytest.approx(4)
    assert A.sylvester_diameter_bound(3, 1, 1) == pytest.approx(5 / 6)


def test_limit_integrals():
    for scale in (1.0, 0.5, 2.0):
        assert A.verify_type1_integral(scale) == pytest.approx(4.0, abs=1e-8)
        assert A.verify_type2_integral(scale) == pytest.approx(4 - math.pi**2 / 3, abs=1e-8)
    assert A.verify_type2_direct() == pytest.approx(4 - math.pi**2 / 3, abs=1e-8)


def test_ein():
    for z in (0.1, 1.0, 3.9, 4.1, 10.0):
        from scipy import integrate
        ref = integrate.quad(lambda t: -math.expm1(-t) / t, 0, z, epsabs=1e-15)[0]
        assert A.ein(z) == pytest.approx(ref, rel=1e-13)
    assert A.ein(4.0) == pytest.approx(A.ein_series(4.0), rel=1e-13)


def test_series():
    pos, alt = A.series_type2_parts()
    assert pos == pytest.approx(2 * math.pi**2 / 3, abs=1e-8)
    assert alt == pytest.approx(math.pi**2 / 3, abs=1e-8)
    pos, alt = A.series_check_accelerated()
    assert pos == pytest.approx(2 * math.pi**2 / 3, abs=1e-12)
    assert alt == pytest.approx(math.pi**2 / 3, abs=1e-12)


def test_four_hole_assembly():
    parts = A.four_hole_constant_assembly()
    assert parts["type1"] == pytest.approx(2.0, abs=1e-8)
    assert parts["type2"] == pytest.approx(8 - 2 * math.pi**2 / 3, abs=1e-8)
    assert parts["total"] == pytest.approx(A.planar_constant(4), abs=1e-8)
