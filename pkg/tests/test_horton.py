import numpy as np
import pytest

from holescope.geom import check_general_position
from holescope.holes import count_k_holes_bruteforce, count_k_holes_fast
from holescope.horton import HortonSpec, horton_gaps, horton_integer_coords, horton_set, max_float_exponent


def test_small_sets():
    assert horton_set(0).n == 1
    four = horton_set(2)
    assert four.n == 4
    assert count_k_holes_fast(four, 4).counts[4] >= 1
    assert count_k_holes_fast(four, 4).counts[4] == count_k_holes_bruteforce(four, 4)


@pytest.mark.parametrize("m", range(3, 9))
def test_no_7_holes(m):
    ps = horton_set(m)
    assert ps.n == 2**m
    assert np.array_equal(np.sort(ps.points[:, 0]), np.arange(2**m) / 2**m)
    assert check_general_position(ps.points)
    assert count_k_holes_fast(ps, 7).counts[7] == 0


def test_horton_64_brute():
    assert count_k_holes_bruteforce(horton_set(6), 7) == 0


def test_triangle_growth_rate():
    counts = {m: count_k_holes_fast(horton_set(m), 3).counts[3] for m in range(5, 10)}
    for m in range(7, 10):
        assert 3.5 <= counts[m] / counts[m - 1] <= 4.5


def test_gap_factor():
    a, b = horton_gaps(5, 1.0), horton_gaps(5, 2.5)
    assert all(y >= x for x, y in zip(a, b))
    ps = horton_set(HortonSpec(5, 2.5))
    assert count_k_holes_fast(ps, 7).counts[7] == 0


def test_spec_validation():
    with pytest.raises(ValueError):
        HortonSpec(15)
    with pytest.raises(ValueError):
        HortonSpec(3, 0.5)


def test_float_limit():
    m = max_float_exponent()
    horton_set(m)
    with pytest.raises(ValueError):
        horton_set(m + 1)
    # exact integers remain available beyond the float limit
    pts = horton_integer_coords(m + 1)
    assert len(pts) == 2 ** (m + 1)
