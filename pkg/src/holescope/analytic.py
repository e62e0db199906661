"""Closed-form constants, cap geometry and bound formulas.

Also evaluates, by quadrature, the two limit integrals whose sum gives the
planar 4-hole constant 10 - 2*pi^2/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special


class QuadratureError(RuntimeError):
    """A quadrature or series evaluation did not reach its error target."""


@dataclass(frozen=True)
class CapSpec:
    dim: int
    height: float
    center: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64)
        if c.shape != (self.dim,):
            raise ValueError("cap center must be a vector of length dim")
        if abs(np.linalg.norm(c) - 1.0) > 1e-12:
            raise ValueError("cap center must be a unit vector")
        if not 0.0 < self.height <= 1.0:
            raise ValueError("cap height must lie in (0, 1]")
        object.__setattr__(self, "center", c)

    def contains(self, x) -> bool:
        """Whether a point of the unit ball lies in the cap."""
        x = np.asarray(x, dtype=np.float64)
        return bool(np.dot(x, x) <= 1.0 + 1e-15 and np.dot(x, self.center) >= 1.0 - self.height)


@dataclass(frozen=True)
class BoundReport:
    value: float
    lower: float | None = None
    upper: float | None = None

    @property
    def satisfied(self) -> bool:
        if self.lower is not None and self.value < self.lower:
            return False
        if self.upper is not None and self.value > self.upper:
            return False
        return True


def _check_dim(d, least=1):
    if int(d) != d or d < least:
        raise ValueError(f"dimension must be an integer >= {least}, got {d}")


def kappa(d: int) -> float:
    """Volume of the d-dimensional unit ball, pi^(d/2) / Gamma(1 + d/2).

    Uses the exact recurrence kappa_d = 2*pi/d * kappa_{d-2}.
    """
    _check_dim(d)
    k = 2.0 if d % 2 else 1.0
    for j in range(2 if d % 2 == 0 else 3, d + 1, 2):
        k *= 2.0 * math.pi / j
    return k


def omega(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d."""
    _check_dim(d)
    return d * kappa(d)


def _check_h(h, hi=1.0):
    if not 0.0 < h <= hi:
        raise ValueError(f"cap height must lie in (0, {hi}], got {h}")


def cap_volume_exact(d: int, h: float) -> float:
    """Volume of {x in B^d : x_1 >= 1 - h} by integrating slice volumes."""
    _check_dim(d, 2)
    _check_h(h)
    kd1 = kappa(d - 1)
    val, err = integrate.quad(lambda t: kd1 * (1.0 - t * t) ** ((d - 1) / 2.0),
                              1.0 - h, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    if err > 1e-10 * abs(val):
        raise QuadratureError(f"cap volume quadrature error {err:g}")
    return val


def cap_volume_beta(d: int, h: float) -> float:
    """Cap volume through the regularised incomplete beta function (h <= 1)."""
    _check_h(h)
    return 0.5 * kappa(d) * special.betainc((d + 1) / 2.0, 0.5, h * (2.0 - h))


def cap_volume_lower_bound(d: int, h: float) -> float:
    _check_dim(d, 2)
    _check_h(h)
    return math.sqrt(2.0 * h - h * h) ** (d - 1) * h / (2.0 * d) * kappa(d)


def cap_area_exact(d: int, h: float) -> float:
    """(d-1)-volume of the spherical part of the cap, by polar-angle quadrature."""
    _check_dim(d, 2)
    _check_h(h)
    theta0 = math.acos(1.0 - h)
    val, _ = integrate.quad(lambda th: math.sin(th) ** (d - 2), 0.0, theta0,
                            epsabs=0.0, epsrel=1e-13)
    return omega(d - 1) * val


def cap_area_beta(d: int, h: float) -> float:
    _check_h(h)
    return 0.5 * omega(d) * special.betainc((d - 1) / 2.0, 0.5, h * (2.0 - h))


def cap_area_upper_bound(d: int, h: float) -> float:
    _check_dim(d, 2)
    if not 0.0 < h <= 0.25:
        raise ValueError("the cap area bound needs 0 < h <= 1/4")
    return (4.0 * math.sqrt(h)) ** (d - 1) * omega(d)


def max_greedy_height(d: int, k: int) -> float:
    return 1.0 / (64.0 * k ** (2.0 / (d - 1)))


def greedy_cap_placement(d: int, k: int, h: float, seeds, rng=None,
                         max_tries: int = 100_000) -> np.ndarray:
    """Centres x_{d+1..k} of pairwise disjoint height-h caps avoiding the seeds.

    Each new centre is any point of the sphere outside the height-4h caps
    around all earlier centres (seeds included). Random unit vectors are tried
    first; a deterministic Fibonacci-sphere scan is the fallback.
    """
    _check_dim(d, 2)
    seeds = np.asarray(seeds, dtype=np.float64).reshape(-1, d)
    if len(seeds) != d:
        raise ValueError(f"need exactly {d} seed points")
    if k < d:
        raise ValueError("k must be at least d")
    if not 0.0 < h <= max_greedy_height(d, k) * (1 + 1e-12):
        raise ValueError(f"h must lie in (0, 1/(64 k^(2/(d-1)))] = (0, {max_greedy_height(d, k):g}]")
    if rng is None:
        rng = np.random.default_rng(0)
    # a point of S^{d-1} lies in C(4h, x) iff it is within chord distance sqrt(8h) of x
    excl = math.sqrt(8.0 * h)
    centers = list(seeds)
    found = []

    def free(x):
        return all(np.linalg.norm(x - c) > excl for c in centers)

    for _ in range(k - d):
        pick = None
        for _ in range(max_tries):
            x = rng.standard_normal(d)
            x /= np.linalg.norm(x)
            if free(x):
                pick = x
                break
        if pick is None:
            pick = next((x for x in _sphere_grid(d, 200_000) if free(x)), None)
        if pick is None:
            raise RuntimeError("no free point found on the sphere")
        centers.append(pick)
        found.append(pick)
    return np.array(found).reshape(-1, d)


def _sphere_grid(d, m):
    if d == 2:
        for t in np.linspace(0, 2 * np.pi, m, endpoint=False):
            yield np.array([math.cos(t), math.sin(t)])
        return
    gen = np.random.default_rng(12345)
    for _ in range(m):
        x = gen.standard_normal(d)
        yield x / np.linalg.norm(x)


def planar_constant(k: int) -> float | None:
    """lim n^-2 E[#k-holes] for n uniform points in a unit-area convex body."""
    if k < 3:
        raise ValueError("holes have at least 3 points")
    if k == 3:
        return 2.0
    if k == 4:
        return 10.0 - 2.0 * math.pi**2 / 3.0
    return None


def empty_simplex_bounds(d: int, p_prev: float) -> BoundReport:
    """Lower and upper bounds on lim n^-d E[#empty simplices] in R^d.

    ``p_prev`` is an upper bound on the Sylvester probability in dimension d-1
    (1 for d = 2, 1/3 for d = 3). ``value`` is the upper bound itself.
    """
    _check_dim(d, 2)
    if not 0.0 < p_prev <= 1.0:
        raise ValueError("p_prev must lie in (0, 1]")
    lower = 2.0 / (math.factorial(d - 1) * p_prev)
    upper = (d / (d + 1.0)) * kappa(d - 1) ** (d + 1) * kappa(d * d) / (
        kappa(d) ** (d - 1) * kappa((d - 1) * (d + 1)))
    return BoundReport(value=upper, lower=lower, upper=upper)


def holes_upper_bound(d: int, k: int, n: int) -> float:
    """Upper bound on E[#k-holes] for n uniform points in a unit-volume body."""
    _check_dim(d, 2)
    if k < d + 1 or n < k:
        raise ValueError("need k >= d+1 and n >= k")
    e = k - d - 1
    falling = 1.0
    for i in range(k - 1):
        falling *= n - i
    lead = 2.0 ** (d - 1) * (2.0 * d ** (2 * d - 1) * math.comb(k, d // 2)) ** e
    return lead * falling / (math.factorial(e) * float(n - k + 1) ** e)


def blaschke_bounds() -> tuple[float, float]:
    """Range of the planar Sylvester probability: ellipse minimum, triangle maximum."""
    return 35.0 / (12.0 * math.pi**2), 1.0 / 3.0


def sylvester_diameter_bound(d: int, D: float, vol: float) -> float:
    if not (D > 0 and vol > 0):
        raise ValueError("diameter and volume must be positive")
    return (d + 2) * D**d / (math.factorial(d) * vol)


# ---------------------------------------------------------------- limit integrals

TAIL_TOL = 1e-12


def _tail_cut(rate: float) -> float:
    # smallest T with exp(-rate*T)/rate-type tail below TAIL_TOL
    return math.log(1.0 / (TAIL_TOL * min(rate, 1.0))) / rate


def _quad(f, a, b, **kw):
    val, err = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=500, **kw)
    if err > 1e-10:
        raise QuadratureError(f"quadrature error estimate {err:g} too large")
    return val


def verify_type1_integral(scale: float = 1.0) -> float:
    """Double integral of l^2 exp(-l (Y + Z) / 2) over the positive quadrant.

    The result is 4 for every edge length l = ``scale``.
    """
    ell = float(scale)
    cut = _tail_cut(ell / 2.0)
    inner = lambda y: _quad(lambda z: ell * ell * math.exp(-ell * (y + z) / 2.0), 0.0, cut)
    return _quad(inner, 0.0, cut)


def ein(z: float) -> float:
    """Entire exponential integral: int_0^z (1 - e^-t)/t dt."""
    if z <= 0.0:
        return 0.0
    if z < 4.0:
        return ein_series(z)
    return float(np.euler_gamma + math.log(z) + special.exp1(z))


def ein_series(z: float, tol: float = 1e-17) -> float:
    """sum_{k>=1} (-1)^{k+1} z^k / (k k!)."""
    total, term, k = 0.0, 1.0, 0
    while True:
        k += 1
        term *= z / k  # z^k / k!
        add = term / k
        total += add if k % 2 else -add
        if add < tol * max(abs(total), 1e-300) and k > z:
            return total
        if k > 500:
            raise QuadratureError("Ein series did not converge")


def verify_type2_integral(scale: float = 1.0) -> float:
    """2 int_0^inf e^{-lY/2}/Y int_0^Y (l - (1 - e^{-lY'/2}) / (Y'/2)) dY' dY.

    With z = lY/2 the inner integral is 2(z - Ein(z)), so the value is
    4 int_0^inf e^{-z} (1 - Ein(z)/z) dz = 4 - pi^2/3 for every l.
    """
    ell = float(scale)

    def inner(y):
        # int_0^y (l - 2(1 - e^{-l t/2})/t) dt = l*y - 2*Ein(l*y/2)
        return ell * y - 2.0 * ein(ell * y / 2.0)

    def outer(y):
        if y == 0.0:
            return 0.0
        return 2.0 * math.exp(-ell * y / 2.0) / y * inner(y)

    cut = _tail_cut(ell / 2.0) + 10.0 / ell
    return _quad(outer, 0.0, cut, points=[4.0 * 2.0 / ell])


def verify_type2_direct() -> float:
    """4 int_0^inf e^{-z}/z int_0^z (1 - (1 - e^{-t})/t) dt dz by nested quadrature."""
    def g(t):
        return 1.0 - (-math.expm1(-t) / t if t > 0 else 1.0)

    def outer(z):
        if z == 0.0:
            return 0.0
        return math.exp(-z) / z * _quad(g, 0.0, z)

    return 4.0 * _quad(outer, 0.0, _tail_cut(1.0) + 10.0)


def series_type2_parts(n_terms: int = 1_000_000) -> tuple[float, float]:
    """(4 sum 1/k^2, 4 sum (-1)^{k+1}/k^2) from the termwise Gamma integrals.

    Each term is 1/(k k!) * Gamma(k) = 1/k^2. The positive series gets an
    Euler-Maclaurin tail correction; the alternating one averages the last
    two partial sums.
    """
    k = np.arange(1, n_terms + 1, dtype=np.float64)
    terms = 1.0 / (k * k)
    # sum small terms first
    pos = float(np.sum(terms[::-1]))
    N = float(n_terms)
    pos += 1.0 / N - 1.0 / (2.0 * N * N) + 1.0 / (6.0 * N**3)
    signs = np.where(k % 2 == 1, 1.0, -1.0)
    alt_terms = (signs * terms)[::-1]
    s_n = float(np.sum(alt_terms))
    last = float(signs[-1] * terms[-1])
    alt = s_n - 0.5 * last
    return 4.0 * pos, 4.0 * alt


def series_check_accelerated() -> tuple[float, float]:
    """Same two sums via mpmath's Richardson/Levin acceleration (cross-check)."""
    import mpmath

    pos = mpmath.nsum(lambda k: 1 / k**2, [1, mpmath.inf])
    alt = mpmath.nsum(lambda k: (-1) ** (k + 1) / k**2, [1, mpmath.inf])
    return float(4 * pos), float(4 * alt)


def four_hole_constant_assembly() -> dict[str, float]:
    """Assemble lim n^-2 E[#4-holes] from its two hole types.

    Per edge {p1, p2}: type 1 contributes the type-1 integral (4), type 2
    four symmetric copies of the type-2 integral. Summing over the ~n^2/2
    edges halves each contribution.
    """
    t1 = verify_type1_integral()
    t2 = verify_type2_integral()
    type1 = t1 / 2.0
    type2 = 4.0 * t2 / 2.0
    return {"type1": type1, "type2": type2, "total": type1 + type2}
