"""Monte Carlo kernels for the Sylvester probability (numba)."""

import numpy as np
from numba import njit

from holescope._predicates import orient2d, orient3d_filtered

UNDECIDED = 2


@njit(cache=True)
def planar_hits(pts):
    """pts: (s, 4, 2). 1 where one point lies inside the triangle of the other three."""
    s = pts.shape[0]
    out = np.zeros(s, np.int8)
    for t in range(s):
        p = pts[t]
        sg = np.empty(4, np.int64)
        # sg[i]: orientation of the triangle that omits point i
        sg[0] = orient2d(p[1, 0], p[1, 1], p[2, 0], p[2, 1], p[3, 0], p[3, 1])
        sg[1] = orient2d(p[0, 0], p[0, 1], p[2, 0], p[2, 1], p[3, 0], p[3, 1])
        sg[2] = orient2d(p[0, 0], p[0, 1], p[1, 0], p[1, 1], p[3, 0], p[3, 1])
        sg[3] = orient2d(p[0, 0], p[0, 1], p[1, 0], p[1, 1], p[2, 0], p[2, 1])
        # point i is inside the other triangle iff the alternating signs agree
        # for the three triangles containing i; equivalently the sign pattern
        # (+,-,+,-) of sg is broken in exactly one place
        a = sg[0]
        b = -sg[1]
        c = sg[2]
        d = -sg[3]
        pos = (a > 0) + (b > 0) + (c > 0) + (d > 0)
        if pos == 1 or pos == 3:
            out[t] = 1
    return out


@njit(cache=True)
def spatial_hits(pts):
    """pts: (s, 5, 3). 1 if some point lies inside the tetrahedron of the others,
    UNDECIDED if a filtered orientation was inconclusive."""
    s = pts.shape[0]
    out = np.zeros(s, np.int8)
    sg = np.empty(5, np.int64)
    for t in range(s):
        p = pts[t]
        bad = False
        for i in range(5):
            idx = np.empty(4, np.int64)
            m = 0
            for j in range(5):
                if j != i:
                    idx[m] = j
                    m += 1
            v = orient3d_filtered(p[idx[0]], p[idx[1]], p[idx[2]], p[idx[3]])
            if v == UNDECIDED:
                bad = True
                break
            sg[i] = v if i % 2 == 0 else -v
        if bad:
            out[t] = UNDECIDED
            continue
        pos = 0
        for i in range(5):
            pos += sg[i] > 0
        if pos == 1 or pos == 4:
            out[t] = 1
    return out
