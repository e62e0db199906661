"""Classical Horton sets: arbitrarily large planar sets without 7-holes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from holescope.geom import PointSet

M_MAX = 14
# largest y range that survives the power-of-two scaling exactly in float64
_FLOAT_EXACT = 2**53


@dataclass(frozen=True)
class HortonSpec:
    size_exponent: int
    vertical_gap_factor: float = 1.0

    def __post_init__(self):
        if not 0 <= self.size_exponent <= M_MAX:
            raise ValueError(f"size_exponent must lie in 0..{M_MAX}")
        if not self.vertical_gap_factor >= 1.0:
            raise ValueError("vertical_gap_factor must be at least 1")


def horton_gaps(m: int, factor: float = 1.0) -> list[int]:
    """Vertical offset added at each recursion depth (depth 0 = top split).

    At depth r the odd half of a 2^(m-r)-point block is lifted by
    G_r > Y (1 + 2^(m-r-1)), where Y is the y-range of each half. A line
    through two points of one half then deviates from that half's values by
    less than Y 2^(m-r-1) across the block, so every such line separates the
    two halves as the construction requires.
    """
    gaps = [0] * m
    span = 0
    for r in range(m - 1, -1, -1):
        need = span * (1 + 2 ** (m - r - 1)) + 1
        gaps[r] = math.ceil(factor * need)
        span += gaps[r]
    return gaps


def horton_integer_coords(m: int, factor: float = 1.0) -> list[tuple[int, int]]:
    """Exact integer Horton set of size 2^m: x = i, y = sum of gaps over set bits of i."""
    gaps = horton_gaps(m, factor)
    pts = []
    for i in range(1 << m):
        y = sum(g for r, g in enumerate(gaps) if (i >> r) & 1)
        pts.append((i, y))
    return pts


def horton_set(spec: HortonSpec | int) -> PointSet:
    """Horton set scaled into the unit square by powers of two (exact in float64)."""
    if isinstance(spec, int):
        spec = HortonSpec(spec)
    m = spec.size_exponent
    pts = horton_integer_coords(m, spec.vertical_gap_factor)
    ymax = max(y for _, y in pts)
    if ymax >= _FLOAT_EXACT:
        raise ValueError(
            f"Horton set with m={m} needs y-coordinates up to {ymax}, beyond exact "
            "double precision; use horton_integer_coords for exact integers")
    ybits = max(ymax, 1).bit_length()
    arr = np.array(pts, dtype=np.float64)
    arr[:, 0] /= 2.0**m
    arr[:, 1] /= 2.0**ybits
    return PointSet(arr, general_position=True)


def max_float_exponent(factor: float = 1.0) -> int:
    """Largest m whose Horton set is representable exactly as floats."""
    m = 0
    while m < M_MAX and sum(horton_gaps(m + 1, factor)) < _FLOAT_EXACT:
        m += 1
    return m
