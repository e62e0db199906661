"""Acceptance checks; one PASS/FAIL line per criterion in the terminal summary."""

import math
import time
from contextlib import contextmanager
from math import comb

import numpy as np
import pytest

from holescope import analytic as A
from holescope.bodies import Rng, ball, disk, normalize_to_unit_volume, sample_points, square, tetrahedron, triangle
from holescope.experiments import (ExperimentConfig, compare_bodies_3d, estimate_expected_simplex_volume,
                                   estimate_sylvester_p, run_hole_experiment, sylvester_identity_gap, z_value)
from holescope.geom import PointSet, check_general_position
from holescope.holes import (count_empty_simplices_dD, count_empty_simplices_reference, count_k_holes,
                             count_k_holes_bruteforce, count_k_holes_fast)
from holescope.horton import horton_set

SEED = 20240601
K4 = 10 - 2 * math.pi**2 / 3
BALL_BAND = 3.384


@contextmanager
def criterion(log, number, title):
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        log.append(f"criterion {number}: FAIL  {title}  [{info['detail']}] {type(exc).__name__}: {exc}")
        raise
    log.append(f"criterion {number}: PASS  {title}  [{info['detail']}]")


# ---------------------------------------------------------------- shared runs

_runs = {}
_large = {}


def hole_run(body_fn, n, trials):
    key = (body_fn.__name__, n, trials)
    if key not in _runs:
        cfg = ExperimentConfig(body_fn(), n=n, trials=trials, k_min=3, k_max=6, master_seed=SEED)
        t0 = time.perf_counter()
        exp = run_hole_experiment(cfg)
        _runs[key] = (exp, time.perf_counter() - t0)
    return _runs[key][0]


# ---------------------------------------------------------------- 1, 2

def test_criterion_01_constants(acceptance_log):
    with criterion(acceptance_log, 1, "closed-form constants") as info:
        c4 = A.planar_constant(4)
        b = A.empty_simplex_bounds(3, 1 / 3)
        info["detail"] = f"c4={c4:.15f} lower={b.lower:.12g} upper={b.upper:.9f}"
        assert abs(c4 - K4) <= 1e-12
        assert abs(b.lower - 3) <= 1e-12
        assert abs(b.upper - 12 * math.pi**2 / 35) <= 1e-12
        assert abs(b.upper - 3.38386) <= 1e-5


def test_criterion_02_integrals(acceptance_log):
    with criterion(acceptance_log, 2, "limit integrals and series") as info:
        t0 = time.perf_counter()
        r1 = abs(A.verify_type1_integral() - 4)
        r2 = abs(A.verify_type2_integral() - (4 - math.pi**2 / 3))
        pos, alt = A.series_type2_parts()
        r3 = abs(pos - 2 * math.pi**2 / 3)
        r4 = abs(alt - math.pi**2 / 3)
        dt = time.perf_counter() - t0
        info["detail"] = f"residuals {r1:.1e} {r2:.1e} {r3:.1e} {r4:.1e}; {dt:.2f}s"
        assert max(r1, r2, r3, r4) <= 1e-8
        assert dt < 10


# ---------------------------------------------------------------- 3, 4, 5

def test_criterion_03_three_holes(acceptance_log):
    with criterion(acceptance_log, 3, "3-hole density, square n=2000") as info:
        small = hole_run(square, 1000, 30).estimates[3]
        big = hole_run(square, 2000, 30).estimates[3]
        info["detail"] = f"n=1000 {small.mean:.5f}, n=2000 {big.mean:.5f} +- {big.half_width:.5f}"
        assert 1.90 <= big.mean <= 2.10
        assert abs(big.mean - 2) < abs(small.mean - 2)


def test_criterion_04_four_holes(acceptance_log):
    with criterion(acceptance_log, 4, "4-hole density and body independence") as info:
        est = {f.__name__: hole_run(f, 2000, 30).estimates[4] for f in (triangle, square, disk)}
        info["detail"] = ", ".join(f"{k} {e.mean:.4f}+-{e.half_width:.4f}" for k, e in est.items())
        assert 3.20 <= est["square"].mean <= 3.60
        names = list(est)
        for i in range(3):
            for j in range(i):
                assert est[names[i]].overlaps(est[names[j]])


def test_criterion_05_large_n(acceptance_log):
    with criterion(acceptance_log, 5, "n=25000 single trials") as info:
        parts = []
        for body_fn in (triangle, square, disk):
            body = normalize_to_unit_volume(body_fn())
            n = 25000
            for attempt in range(10):
                pts = sample_points(body, n, Rng(SEED, (99, attempt)))
                if check_general_position(pts):
                    break
            t0 = time.perf_counter()
            rep = count_k_holes(PointSet(pts, general_position=True), 3, 6)
            dt = time.perf_counter() - t0
            d3, d4 = rep.counts[3] / n**2, rep.counts[4] / n**2
            _large[body_fn.__name__] = rep
            parts.append(f"{body_fn.__name__} {d3:.4f}/{d4:.4f} in {dt:.0f}s")
            info["detail"] = "; ".join(parts)
            assert dt < 1800
            assert 1.95 <= d3 <= 2.05
            assert 3.35 <= d4 <= 3.50


# ---------------------------------------------------------------- 6, 7

def test_criterion_06_oracles(acceptance_log):
    with criterion(acceptance_log, 6, "fast vs brute force, 3D oracles") as info:
        rng = np.random.default_rng(SEED)
        planar = 0
        while planar < 500:
            n = int(rng.integers(6, 21))
            pts = rng.random((n, 2))
            if not check_general_position(pts):
                continue
            fast = count_k_holes_fast(pts, 6).counts
            brute = count_k_holes(PointSet(pts), 3, 6, engine="brute").counts
            assert fast == brute, pts.tolist()
            planar += 1
        spatial = 0
        while spatial < 50:
            n = int(rng.integers(5, 13))
            pts = rng.random((n, 3))
            if not check_general_position(pts):
                continue
            assert count_empty_simplices_dD(pts) == count_empty_simplices_reference(pts)
            spatial += 1
        info["detail"] = f"{planar} planar sets, {spatial} spatial sets"


def unimodular(rng):
    m = np.eye(2, dtype=np.int64)
    for _ in range(4):
        e = np.eye(2, dtype=np.int64)
        i = int(rng.integers(2))
        e[i, 1 - i] = int(rng.integers(-3, 4))
        m = e @ m
    if rng.integers(2):
        m = np.array([[0, 1], [1, 0]]) @ m
    return m


def test_criterion_07_structure(acceptance_log):
    with criterion(acceptance_log, 7, "structural invariants") as info:
        rng = np.random.default_rng(SEED + 7)
        worst = math.inf
        done = 0
        while done < 200:
            pts = rng.random((30, 2))
            if not check_general_position(pts):
                continue
            worst = min(worst, count_k_holes_fast(pts, 3).counts[3] - comb(29, 2))
            done += 1
        assert worst >= 0
        for n in range(3, 13):
            ang = 2 * np.pi * np.arange(n) / n + 0.3
            counts = count_k_holes_fast(np.c_[np.cos(ang), np.sin(ang)], 8).counts
            assert all(counts[k] == comb(n, k) for k in range(3, 9))
        h7 = count_k_holes_bruteforce(horton_set(6), 7)
        assert h7 == 0
        base = None
        while base is None:
            ipts = rng.integers(0, 1000, size=(40, 2)).astype(np.float64)
            if check_general_position(ipts):
                base = count_k_holes_fast(ipts, 6).counts
        for _ in range(20):
            m = unimodular(rng)
            assert round(abs(np.linalg.det(m))) == 1
            moved = ipts @ m.T.astype(np.float64) + rng.integers(-50, 50, size=2)
            assert count_k_holes_fast(moved, 6).counts == base
        info["detail"] = f"min counts[3]-C(29,2)={worst}; Horton-64 7-holes={h7}; 20 maps"


# ---------------------------------------------------------------- 8, 9, 10

def test_criterion_08_sylvester(acceptance_log):
    with criterion(acceptance_log, 8, "Sylvester probability") as info:
        t0 = time.perf_counter()
        lo, hi = A.blaschke_bounds()
        rng = Rng(SEED, 8)
        p = {}
        for i, f in enumerate((triangle, disk, square)):
            p[f.__name__] = estimate_sylvester_p(normalize_to_unit_volume(f()), 10**6, rng.child(i))
        ev = estimate_expected_simplex_volume(normalize_to_unit_volume(triangle()), 10**6, rng.child(9))
        gap, hw = sylvester_identity_gap(p["triangle"], ev, 2)
        dt = time.perf_counter() - t0
        info["detail"] = (", ".join(f"{k} {e.mean:.5f}" for k, e in p.items())
                          + f"; |p-4EV|={gap:.1e} <= {hw:.1e}; {dt:.0f}s")
        assert p["triangle"].contains(1 / 3)
        assert p["disk"].contains(35 / (12 * math.pi**2))
        assert lo < p["square"].mean < hi
        assert gap <= hw
        assert dt < 120


def test_criterion_09_3d_ordering(acceptance_log):
    with criterion(acceptance_log, 9, "3D ordering and drift") as info:
        t0 = time.perf_counter()
        res = dict((b.name, e) for b, e in compare_bodies_3d([tetrahedron(), ball(3)], 60, 400, Rng(SEED, 9)))
        tet, b60 = res["tetrahedron"], res["ball"]
        b90 = compare_bodies_3d([ball(3)], 90, 200, Rng(SEED, 90))[0][1]
        dt = time.perf_counter() - t0
        z = (b60.mean - tet.mean) / math.hypot(tet.stderr, b60.stderr)
        info["detail"] = (f"tet {tet.mean:.4f}, ball {b60.mean:.4f} (z={z:.1f}); "
                          f"ball n=90 {b90.mean:.4f}; {dt:.0f}s")
        assert z > z_value(0.9999)
        assert abs(b90.mean - BALL_BAND) < abs(b60.mean - BALL_BAND)
        assert dt < 1200


def test_criterion_10_caps(acceptance_log):
    with criterion(acceptance_log, 10, "cap volume, area and placement bounds") as info:
        for d in range(2, 7):
            for h in np.arange(1, 101) / 100:
                assert A.cap_volume_lower_bound(d, h) < A.cap_volume_exact(d, h)
            for h in np.arange(1, 26) / 100:
                assert A.cap_area_exact(d, h) <= A.cap_area_upper_bound(d, h)
        rng = np.random.default_rng(SEED)
        placements = 0
        for d in (2, 3):
            for k in range(d, 11):
                h = A.max_greedy_height(d, k)
                seeds = rng.standard_normal((d, d))
                seeds /= np.linalg.norm(seeds, axis=1, keepdims=True)
                c = A.greedy_cap_placement(d, k, h, seeds, rng)
                assert len(c) == k - d
                for i in range(len(c)):
                    assert all(np.linalg.norm(c[i] - s) > math.sqrt(2 * h) for s in seeds)
                    assert all(np.linalg.norm(c[i] - c[j]) > 2 * math.sqrt(2 * h) for j in range(i))
                placements += 1
        info["detail"] = f"d<=6 cap grids, {placements} greedy placements"


# ---------------------------------------------------------------- 11

def test_criterion_11_envelope(acceptance_log):
    with criterion(acceptance_log, 11, "per-trial upper-bound envelope, k=3..6") as info:
        checked = 0
        over = []
        for body_fn, n in ((square, 1000), (square, 2000), (triangle, 2000), (disk, 2000)):
            exp = hole_run(body_fn, n, 30)
            for k in range(3, 7):
                bad = np.flatnonzero(~(exp.densities(k) < A.holes_upper_bound(2, k, n) / n**2))
                over += [f"{body_fn.__name__} n={n} k={k} trial {i}" for i in bad]
                checked += len(exp.trials)
        for name, rep in _large.items():
            for k in range(3, 7):
                if not rep.counts[k] < A.holes_upper_bound(2, k, rep.n):
                    over.append(f"{name} n={rep.n} k={k}")
                checked += 1
        info["detail"] = f"{checked} trial densities checked, {len(over)} at or above the bound"
        assert not over, "; ".join(over[:10])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
