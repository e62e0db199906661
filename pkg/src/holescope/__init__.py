"""Counting k-holes in random point sets and checking their limit constants."""

import os

# the TBB layer shipped with some numba wheels warns on import; the portable
# workqueue layer is enough for the counters' flat parallel loops
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

__version__ = "0.1.0"
