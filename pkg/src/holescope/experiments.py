"""Monte Carlo experiments: hole densities, Sylvester probability, simplex volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from holescope import _sylvester
from holescope.analytic import empty_simplex_bounds, holes_upper_bound
from holescope.bodies import ConvexBody, Rng, normalize_to_unit_volume, sample_points, volume
from holescope.geom import DegenerateError, PointSet, in_convex_position
from holescope.holes import count_empty_simplices_dD, count_k_holes

DEFAULT_SEED = 20240601
DEFAULT_LEVEL = 0.9999
MAX_RESAMPLES = 10
BATCH = 200_000


class ConfigError(ValueError):
    """Invalid experiment configuration; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class ResampleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    ci_low: float
    ci_high: float
    level: float
    samples: int

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)

    def contains(self, x: float) -> bool:
        return self.ci_low <= x <= self.ci_high

    def overlaps(self, other: "Estimate") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "ci_low": self.ci_low,
                "ci_high": self.ci_high, "level": self.level, "samples": self.samples}


def z_value(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    return float(norm.ppf(0.5 + 0.5 * level))


def _estimate(mean: float, stderr: float, level: float, samples: int) -> Estimate:
    hw = z_value(level) * stderr
    return Estimate(mean, stderr, mean - hw, mean + hw, level, samples)


def confidence_interval(values, level: float = DEFAULT_LEVEL) -> Estimate:
    """Normal-approximation interval mean +- z(level) * stderr."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise ValueError("need at least 2 values for a confidence interval")
    mean = float(v.mean())
    stderr = float(v.std(ddof=1) / math.sqrt(v.size))
    return _estimate(mean, stderr, level, int(v.size))


def _bernoulli_estimate(hits: int, samples: int, level: float) -> Estimate:
    p = hits / samples
    # sample variance of 0/1 data, ddof=1
    var = p * (1.0 - p) * samples / (samples - 1)
    return _estimate(p, math.sqrt(var / samples), level, samples)


@dataclass(frozen=True)
class ExperimentConfig:
    body: ConvexBody
    n: int
    trials: int
    k_min: int = 3
    k_max: int = 4
    master_seed: int = DEFAULT_SEED
    ci_level: float = DEFAULT_LEVEL
    threads: int | None = None

    def __post_init__(self):
        errors = validate_config(self)
        if errors:
            raise ConfigError(errors)

    @property
    def dim(self) -> int:
        return self.body.dim


def validate_config(cfg) -> list[str]:
    errors = []
    d = cfg.body.dim
    if cfg.trials < 2:
        errors.append("trials must be at least 2 (a confidence interval needs 2 values)")
    if cfg.k_min < d + 1:
        errors.append(f"k_min must be at least {d + 1} in dimension {d}")
    if cfg.k_max < cfg.k_min:
        errors.append("k_max must be at least k_min")
    if cfg.k_max > 8:
        errors.append("k_max must be at most 8")
    if cfg.n < cfg.k_max:
        errors.append("n must be at least k_max")
    if not 0 <= cfg.master_seed < 2**64:
        errors.append("master_seed must be a 64-bit unsigned integer")
    if not 0.0 < cfg.ci_level < 1.0:
        errors.append("ci_level must lie in (0, 1)")
    if cfg.threads is not None and cfg.threads < 1:
        errors.append("threads must be positive")
    if d >= 3 and cfg.n > 120:
        errors.append("n is capped at 120 for d >= 3")
    return errors


@dataclass
class TrialRecord:
    index: int
    stream: tuple[int, ...]
    counts: dict[int, int]
    resamples: int = 0
    # k values whose count reached the expectation bound in this trial
    over_envelope: tuple[int, ...] = ()


@dataclass
class HoleExperiment:
    config: ExperimentConfig
    estimates: dict[int, Estimate]
    trials: list[TrialRecord] = field(default_factory=list)

    def densities(self, k: int) -> np.ndarray:
        scale = float(self.config.n) ** self.config.dim
        return np.array([t.counts[k] / scale for t in self.trials])

    def envelope_excess(self) -> dict[int, list[int]]:
        """Trial indices whose count reached holes_upper_bound, per k.

        The bound limits the expected count; single trials may exceed it.
        """
        out = {}
        for t in self.trials:
            for k in t.over_envelope:
                out.setdefault(k, []).append(t.index)
        return out

    def simplex_bound_flag(self) -> str:
        """'ok' or 'marginal' relative to the empty-simplex lower bound.

        Finite-n means sit below the limit, so this is a flag only.
        """
        d = self.config.dim
        if self.config.k_min > d + 1:
            return "n/a"
        lower = empty_simplex_bounds(d, 1.0 if d == 2 else 1.0 / 3.0).lower
        est = self.estimates[d + 1]
        return "ok" if est.mean >= lower - 3.0 * est.half_width else "marginal"


def _trial_stream(index: int, attempt: int) -> tuple[int, int]:
    return (index, attempt)


def run_trial(cfg: ExperimentConfig, index: int, body: ConvexBody | None = None) -> TrialRecord:
    body = body or normalize_to_unit_volume(cfg.body)
    d, n = body.dim, cfg.n
    for attempt in range(MAX_RESAMPLES + 1):
        stream = _trial_stream(index, attempt)
        pts = sample_points(body, n, Rng(cfg.master_seed, stream))
        try:
            rep = count_k_holes(PointSet(pts), cfg.k_min, cfg.k_max, "fast", cfg.threads)
        except DegenerateError:
            continue
        over = tuple(k for k, c in rep.counts.items() if not c < holes_upper_bound(d, k, n))
        return TrialRecord(index, stream, dict(rep.counts), attempt, over)
    raise ResampleBudgetExceeded(f"trial {index}: {MAX_RESAMPLES} degenerate samples in a row")


def run_hole_experiment(cfg: ExperimentConfig, on_trial=None) -> HoleExperiment:
    """All trials of ``cfg``; trial i draws from stream (master_seed, i, attempt).

    Trials run one after another; the counter itself is multithreaded.
    """
    body = normalize_to_unit_volume(cfg.body)
    records = []
    for i in range(cfg.trials):
        rec = run_trial(cfg, i, body)
        records.append(rec)
        if on_trial is not None:
            on_trial(rec)
    scale = float(cfg.n) ** cfg.dim
    est = {k: confidence_interval([r.counts[k] / scale for r in records], cfg.ci_level)
           for k in range(cfg.k_min, cfg.k_max + 1)}
    return HoleExperiment(cfg, est, records)


def estimate_hole_constants(cfg: ExperimentConfig) -> dict[int, Estimate]:
    return run_hole_experiment(cfg).estimates


def _sylvester_hits(pts: np.ndarray) -> np.ndarray:
    d = pts.shape[2]
    if d == 2:
        return _sylvester.planar_hits(pts)
    if d == 3:
        hits = _sylvester.spatial_hits(pts)
        for t in np.flatnonzero(hits == _sylvester.UNDECIDED):
            hits[t] = 0 if in_convex_position(pts[t]) else 1
        return hits
    return np.array([0 if in_convex_position(p) else 1 for p in pts], dtype=np.int8)


def estimate_sylvester_p(body: ConvexBody, samples: int, rng: Rng,
                         level: float = DEFAULT_LEVEL) -> Estimate:
    """Fraction of (d+2)-point draws with one point inside the hull of the rest."""
    if samples < 10_000:
        raise ValueError("samples must be at least 10^4")
    d = body.dim
    hits = 0
    done = 0
    batch = 0
    while done < samples:
        m = min(BATCH, samples - done)
        pts = sample_points(body, m * (d + 2), rng.child(batch)).reshape(m, d + 2, d)
        hits += int(np.count_nonzero(_sylvester_hits(pts)))
        done += m
        batch += 1
    return _bernoulli_estimate(hits, samples, level)


def estimate_expected_simplex_volume(body: ConvexBody, samples: int, rng: Rng,
                                     level: float = DEFAULT_LEVEL) -> Estimate:
    """Mean volume of the simplex of d+1 uniform points, relative to vol(body)."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    d = body.dim
    vol = volume(body)
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = 0
    while done < samples:
        m = min(BATCH, samples - done)
        pts = sample_points(body, m * (d + 1), rng.child(batch)).reshape(m, d + 1, d)
        v = np.abs(np.linalg.det(pts[:, 1:, :] - pts[:, :1, :])) / math.factorial(d) / vol
        total += float(v.sum())
        total_sq += float(np.dot(v, v))
        done += m
        batch += 1
    mean = total / samples
    var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    return _estimate(mean, math.sqrt(var / samples), level, samples)


def sylvester_identity_gap(p: Estimate, ev: Estimate, d: int) -> tuple[float, float]:
    """(|p - (d+2) EV|, joint half-width) for independent estimates at p's level."""
    gap = abs(p.mean - (d + 2) * ev.mean)
    se = math.hypot(p.stderr, (d + 2) * ev.stderr)
    return gap, z_value(p.level) * se


def compare_bodies_3d(bodies: list[ConvexBody], n: int, trials: int, rng: Rng,
                      level: float = DEFAULT_LEVEL) -> list[tuple[ConvexBody, Estimate]]:
    """Empty-tetrahedron densities counts[4]/n^3, sorted by increasing mean."""
    if trials < 2:
        raise ValueError("trials must be at least 2")
    if not 4 <= n <= 120:
        raise ValueError("n must lie in 4..120")
    out = []
    for b, body in enumerate(bodies):
        if body.dim != 3:
            raise ValueError(f"{body.name} is not 3-dimensional")
        body = normalize_to_unit_volume(body)
        vals = []
        for t in range(trials):
            for attempt in range(MAX_RESAMPLES + 1):
                pts = sample_points(body, n, rng.child(b, t, attempt))
                try:
                    c = count_empty_simplices_dD(PointSet(pts))
                except DegenerateError:
                    continue
                break
            else:
                raise ResampleBudgetExceeded(f"{body.name}, trial {t}")
            vals.append(c / float(n) ** 3)
        out.append((body, confidence_interval(vals, level)))
    out.sort(key=lambda be: be[1].mean)
    return out
