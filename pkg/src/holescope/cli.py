"""Command-line front end: ``holescope <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from holescope import __version__, analytic
from holescope.bodies import BODY_NAMES, Rng, from_name, normalize_to_unit_volume, sample_points
from holescope.experiments import (DEFAULT_LEVEL, DEFAULT_SEED, ConfigError, ExperimentConfig,
                                   compare_bodies_3d, run_hole_experiment, validate_config)
from holescope.geom import DegenerateError, PointSet, check_general_position
from holescope.holes import K_MAX_DEFAULT, count_k_holes
from holescope.horton import HortonSpec, horton_set


class UsageError(Exception):
    """Bad input; ``errors`` lists every problem found."""

    def __init__(self, *errors: str):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


# ---------------------------------------------------------------- files

def write_points_csv(pts: np.ndarray, stream) -> None:
    d = pts.shape[1]
    stream.write(",".join(f"x{i + 1}" for i in range(d)) + "\n")
    for row in pts:
        stream.write(",".join(format(float(v), ".17g") for v in row) + "\n")


def read_points(path: str) -> np.ndarray:
    if path.endswith(".npy"):
        arr = np.load(path)
    else:
        with open(path, newline="") as fh:
            header = fh.readline().strip().split(",")
            if not header or any(h.strip() != f"x{i + 1}" for i, h in enumerate(header)):
                raise UsageError(f"{path}: expected header x1,...,xd")
            arr = np.loadtxt(fh, delimiter=",", ndmin=2, dtype=np.float64)
            if arr.size == 0:
                arr = arr.reshape(0, len(header))
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise UsageError(f"{path}: need an (n, d) array with d >= 2")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{path}: non-finite coordinates")
    return arr


def read_config(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and '#' comments ignored."""
    out = {}
    with open(path) as fh:
        for no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{no}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, int, np.floating, np.integer)) else v
                    for v in r])
    return buf.getvalue()


def _rows_to_json(header: list[str], rows: list[list]) -> str:
    return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"


def parse_k_range(text: str) -> tuple[int, int]:
    """'4' -> (4, 4); '3..6' -> (3, 6)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"bad k range {text!r}; use K or KMIN..KMAX") from None


# ---------------------------------------------------------------- commands

def cmd_sample(args) -> int:
    body = normalize_to_unit_volume(from_name(args.body, args.dim))
    if args.n < 1:
        raise UsageError("--n must be positive")
    ps = PointSet(sample_points(body, args.n, Rng(args.seed, 0)))
    if args.out and args.out.endswith(".npy"):
        np.save(args.out, ps.points)
        return 0
    buf = io.StringIO()
    write_points_csv(ps.points, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_count(args) -> int:
    pts = read_points(args.input)
    d = pts.shape[1]
    k_min, k_max = parse_k_range(args.k) if args.k else (d + 1, K_MAX_DEFAULT if d == 2 else d + 1)
    if args.k_min is not None:
        k_min = args.k_min
    if args.k_max is not None:
        k_max = args.k_max
    if not check_general_position(pts):
        raise DegenerateError(f"{args.input}: points are not in general position "
                              "(duplicates or collinear/coplanar points)")
    rep = count_k_holes(PointSet(pts, general_position=True), k_min, k_max, args.engine, args.threads)
    _emit(json.dumps(rep.to_dict()) + "\n", args.out)
    return 0


ESTIMATE_KEYS = ("body", "dim", "n", "trials", "k", "seed", "level", "threads", "format")


def _resolve_estimate(args) -> dict:
    cfg = read_config(args.config) if args.config else {}
    unknown = sorted(set(cfg) - set(ESTIMATE_KEYS))
    errors = [f"unknown config key {k!r}" for k in unknown]
    for key in ESTIMATE_KEYS:
        val = getattr(args, key)
        if val is not None:
            cfg[key] = str(val)
    cfg.setdefault("k", "3..4")
    cfg.setdefault("seed", str(DEFAULT_SEED))
    cfg.setdefault("level", repr(DEFAULT_LEVEL))
    cfg.setdefault("format", "csv")
    for key in ("body", "n", "trials"):
        if key not in cfg:
            errors.append(f"missing required setting {key!r}")
    return cfg, errors


def build_experiment(cfg: dict, errors: list[str]) -> ExperimentConfig:
    def to_int(key):
        if key not in cfg or cfg[key] in ("", "None"):
            return None
        try:
            return int(cfg[key])
        except ValueError:
            errors.append(f"{key} must be an integer, got {cfg[key]!r}")
            return None

    body = None
    if "body" in cfg:
        try:
            body = from_name(cfg["body"], to_int("dim"))
        except ValueError as exc:
            errors.append(str(exc))
    try:
        k_min, k_max = parse_k_range(cfg["k"])
    except UsageError as exc:
        errors.extend(exc.errors)
        k_min = k_max = None
    try:
        level = float(cfg["level"])
    except ValueError:
        errors.append(f"level must be a real number, got {cfg['level']!r}")
        level = None
    if cfg["format"] not in ("csv", "json"):
        errors.append("format must be csv or json")
    n, trials, seed, threads = (to_int(k) for k in ("n", "trials", "seed", "threads"))
    fields = dict(body=body, n=n, trials=trials, k_min=k_min, k_max=k_max,
                  master_seed=seed, ci_level=level, threads=threads)
    if all(v is not None for k, v in fields.items() if k != "threads"):
        probe = argparse.Namespace(**fields)
        errors.extend(validate_config(probe))
    if errors:
        raise UsageError(*errors)
    return ExperimentConfig(**fields)


def write_manifest(path: str, argv: list[str], cfg: dict, exp, started: str, ended: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# holescope {__version__} estimate manifest\n")
        fh.write(f"# command: holescope {' '.join(argv)}\n")
        fh.write(f"# started: {started}\n# finished: {ended}\n")
        fh.write(f"# rerun: holescope estimate --config {path}\n")
        for key in ESTIMATE_KEYS:
            if key in cfg and key != "threads":
                fh.write(f"{key}={cfg[key]}\n")
        fh.write("# per-trial streams (master_seed, trial, attempt):\n")
        for t in exp.trials:
            note = f"  counts at expectation bound: k={list(t.over_envelope)}" if t.over_envelope else ""
            fh.write(f"# trial {t.index}: ({exp.config.master_seed}, "
                     f"{', '.join(map(str, t.stream))}){note}\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_estimate(args) -> int:
    cfg, errors = _resolve_estimate(args)
    exp_cfg = build_experiment(cfg, errors)
    started = _now()
    exp = run_hole_experiment(exp_cfg)
    ended = _now()
    header = ["k", "mean", "stderr", "ci_low", "ci_high", "trials", "n", "body"]
    rows = [[k, e.mean, e.stderr, e.ci_low, e.ci_high, e.samples, exp_cfg.n, exp_cfg.body.name]
            for k, e in sorted(exp.estimates.items())]
    text = _rows_to_json(header, rows) if cfg["format"] == "json" else _rows_to_csv(header, rows)
    _emit(text, args.out)
    manifest = args.manifest or (args.out + ".manifest" if args.out else None)
    if manifest:
        write_manifest(manifest, args.argv, cfg, exp, started, ended)
    return 0


def cmd_horton(args) -> int:
    ps = horton_set(HortonSpec(args.m, args.gap_factor))
    buf = io.StringIO()
    write_points_csv(ps.points, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_constants(args) -> int:
    rows = []
    d = args.d
    if d < 2:
        raise UsageError("--d must be at least 2")
    if d == 2:
        ks = [args.k] if args.k else [3, 4]
        for k in ks:
            c = analytic.planar_constant(k)
            rows.append([f"planar_constant_k{k}", "nan" if c is None else c])
        lo, hi = analytic.blaschke_bounds()
        rows.append(["sylvester_p2_min", lo])
        rows.append(["sylvester_p2_max", hi])
    p_prev = 1.0 if d == 2 else (1.0 / 3.0 if d == 3 else 1.0)
    b = analytic.empty_simplex_bounds(d, p_prev)
    rows.append(["empty_simplex_lower", b.lower])
    rows.append(["empty_simplex_upper", b.upper])
    if args.n is not None:
        for k in ([args.k] if args.k else range(d + 1, d + 4)):
            rows.append([f"holes_upper_bound_k{k}_n{args.n}", analytic.holes_upper_bound(d, k, args.n)])
    rows.append(["kappa", analytic.kappa(d)])
    rows.append(["omega", analytic.omega(d)])
    _emit(_rows_to_csv(["name", "value"], rows), args.out)
    return 0


VERIFY_TOL = 1e-8


def cmd_verify(args) -> int:
    s1, s2 = analytic.series_type2_parts()
    checks = [
        ("type1_integral", analytic.verify_type1_integral(), 4.0),
        ("type2_integral", analytic.verify_type2_integral(), 4.0 - math.pi**2 / 3.0),
        ("type2_integral_direct", analytic.verify_type2_direct(), 4.0 - math.pi**2 / 3.0),
        ("series_inverse_squares", s1, 2.0 * math.pi**2 / 3.0),
        ("series_alternating", s2, math.pi**2 / 3.0),
        ("four_hole_constant", analytic.four_hole_constant_assembly()["total"],
         10.0 - 2.0 * math.pi**2 / 3.0),
    ]
    rows = [[name, v, ref, abs(v - ref)] for name, v, ref in checks]
    _emit(_rows_to_csv(["name", "value", "expected", "residual"], rows), args.out)
    bad = [r[0] for r in rows if not r[3] < VERIFY_TOL]
    if bad:
        print(f"residual above {VERIFY_TOL:g}: {', '.join(bad)}", file=sys.stderr)
        return 1
    return 0


def cmd_compare3d(args) -> int:
    names = [s.strip() for s in args.bodies.split(",") if s.strip()]
    bodies = [from_name(nm, 3) for nm in names]
    if args.trials < 2:
        raise UsageError("--trials must be at least 2")
    res = compare_bodies_3d(bodies, args.n, args.trials, Rng(args.seed, 0), args.level)
    header = ["rank", "body", "mean", "stderr", "ci_low", "ci_high", "trials", "n"]
    rows = [[i + 1, b.name, e.mean, e.stderr, e.ci_low, e.ci_high, e.samples, args.n]
            for i, (b, e) in enumerate(res)]
    text = _rows_to_json(header, rows) if args.format == "json" else _rows_to_csv(header, rows)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holescope", description=__doc__)
    p.add_argument("--version", action="version", version=f"holescope {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="write uniform points from a unit-volume body")
    s.add_argument("--body", required=True, help="|".join(BODY_NAMES))
    s.add_argument("--dim", type=int)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--out", help="CSV path (or .npy); stdout if omitted")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("count", help="count k-holes in a point file")
    s.add_argument("input", metavar="IN")
    s.add_argument("--k", help="K or KMIN..KMAX")
    s.add_argument("--k-min", type=int)
    s.add_argument("--k-max", type=int)
    s.add_argument("--engine", choices=("fast", "brute"), default="fast")
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("estimate", help="Monte Carlo estimate of k-hole densities")
    s.add_argument("--config", help="key=value file; flags override it")
    s.add_argument("--body")
    s.add_argument("--dim", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--k", help="K or KMIN..KMAX (default 3..4)")
    s.add_argument("--seed", type=int)
    s.add_argument("--level", type=float)
    s.add_argument("--threads", type=int)
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--out")
    s.add_argument("--manifest", help="manifest path (default OUT.manifest when --out is set)")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("horton", help="write a Horton set")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--gap-factor", type=float, default=1.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_horton)

    s = sub.add_parser("constants", help="closed-form constants and bounds")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("verify", help="numerical checks of the limit integrals")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("compare3d", help="empty-tetrahedron densities for 3D bodies")
    s.add_argument("--bodies", default="tetrahedron,ball")
    s.add_argument("--n", type=int, default=60)
    s.add_argument("--trials", type=int, default=400)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--level", type=float, default=DEFAULT_LEVEL)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_compare3d)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        for e in exc.errors:
            print(f"holescope: error: {e}", file=sys.stderr)
        return 2
    except DegenerateError as exc:
        print(f"holescope: degenerate input: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"holescope: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
