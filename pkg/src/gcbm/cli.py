"""Command-line entry point: ``gcbm <subcommand> ...``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .combinatorics import run_count_checks
from .decoders import SpectralConfig, decode_algorithm1, decode_ml_exhaustive, decode_parity_noiseless
from .errors import DecodeFailure, GCBMError
from .harness import emit_csv, monotonicity_violations, read_config, run_sweep
from .limits import (
    conjectured_parity_limit,
    divergence_half_theta,
    homogeneity_threshold,
    ldgm_rate,
    parity_scaling_bounds,
    parity_threshold,
    snr_factor,
)
from .model import LabelVector, MeasurementKind, ModelParams, read_measurements, sample_measurements, write_measurements
from .plotting import emit_plot_script, render_figure


def _kv(key: str, value) -> str:
    if value is None:
        value = "none"
    elif isinstance(value, bool):
        value = str(value).lower()
    elif isinstance(value, float):
        value = repr(value)
    return f"{key}={value}"


def cmd_verify_counts(args) -> int:
    reports = run_count_checks(args.n_max, args.d_max, args.delta)
    for rep in reports:
        print(rep.line())
    return 0 if all(rep.ok for rep in reports) else 1


def cmd_limits(args) -> int:
    kind = MeasurementKind.parse(args.kind)
    n, d, theta = args.n, args.d, args.theta
    out = [("kind", kind.value), ("n", n), ("d", d), ("theta", theta), ("snr_factor", snr_factor(theta))]
    if theta > 0:
        out.append(("kl_half_theta", divergence_half_theta(theta)))
    fn = homogeneity_threshold if kind is MeasurementKind.HOMOGENEITY else parity_threshold
    rep = fn(n, d, theta, args.slack)
    out += [
        ("regime", rep.regime),
        ("slack", rep.slack),
        ("sample_complexity_limit", rep.sample_complexity_limit),
        ("required_p", rep.required_p),
    ]
    if rep.required_p is not None:
        out.append(("ldgm_rate", ldgm_rate(n, d, rep.required_p)))
    if rep.warning:
        out.append(("warning", rep.warning))
    if kind is MeasurementKind.PARITY and args.scaling:
        bounds = parity_scaling_bounds(n, d, theta, args.slack)
        for name, r in zip(("upper_nlogn", "upper_linear"), bounds.upper):
            out.append((f"scaling_{name}", r.sample_complexity_limit))
        for name, r in zip(("lower_nlogn", "lower_capacity"), bounds.lower):
            out.append((f"scaling_{name}", r.sample_complexity_limit))
        out.append(("scaling_achievable_above", bounds.achievable_above))
        out.append(("scaling_impossible_below", bounds.impossible_below))
    if kind is MeasurementKind.PARITY and args.conjecture:
        out.append(("conjecture_unproven_limit", conjectured_parity_limit(n, d, theta)))
    for key, value in out:
        print(_kv(key, value))
    return 0


def cmd_decode(args) -> int:
    ms = read_measurements(args.input)
    try:
        if args.method == "ml":
            res = decode_ml_exhaustive(ms, random_ties=args.seed is not None, seed=args.seed)
        elif args.method == "gf2":
            res = decode_parity_noiseless(ms)
        else:
            cfg = SpectralConfig(seed=args.seed or 0)
            res = decode_algorithm1(ms, cfg, c=args.c, sequential=args.sequential)
    except DecodeFailure as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        print(_kv("status", "failed"))
        print(_kv("error", type(exc).__name__))
        return 2
    print(res.estimate.to_string())
    for key in ("method", "objective", "iterations", "flips_last_sweep", "tie_broken"):
        print(_kv(key, getattr(res, key)))
    print(_kv("edges", len(ms)))
    return 0


def cmd_sample(args) -> int:
    n, d = args.n, args.d
    if args.p is not None:
        p = args.p
    else:
        p = args.edges / math.comb(n, d)
    params = ModelParams(n, d, p, args.theta, args.kind)
    if args.truth:
        truth = LabelVector.from_string(args.truth)
    else:
        truth = LabelVector.random(n, np.random.default_rng(args.seed), balanced=args.balanced)
    ms = sample_measurements(params, truth, args.seed)
    write_measurements(ms, args.output)
    print(truth.to_string())
    print(_kv("edges", len(ms)))
    return 0


def cmd_sweep(args) -> int:
    spec = read_config(args.config, master_seed=args.seed)
    result = run_sweep(spec, jobs=args.jobs)
    out = Path(args.out)
    emit_csv(result, out, timing=args.timing)
    x = args.x
    if args.plot_script:
        emit_plot_script(result, args.plot_script, out, x=x)
    if args.figure:
        render_figure(result, args.figure, x=x)
    for row in result.rows:
        print(
            f"n={row.n} d={row.d} theta={row.theta!r} x{row.multiplier!r}: "
            f"{row.successes}/{row.trials} rate={row.rate:.3f} edges~{row.mean_samples:.1f}"
        )
    for curve in monotonicity_violations(result):
        print(f"warning: success rate decreases along curve {curve}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gcbm", description="Exact recovery in the generalized censored block model.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-counts", help="cross-check counting formulas against brute force")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--d-max", type=int, default=40)
    p.add_argument("--delta", type=float, default=0.1)
    p.set_defaults(func=cmd_verify_counts)

    p = sub.add_parser("limits", help="print recovery thresholds as key=value lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--kind", choices=("h", "p"), required=True)
    p.add_argument("--slack", type=float, default=0.0)
    p.add_argument("--scaling", action="store_true", help="add the growing-d parity bounds")
    p.add_argument("--conjecture", action="store_true", help="add the conjectured parity limit (unproven)")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("decode", help="decode a measurement file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("ml", "gf2", "alg1"), required=True)
    p.add_argument("--c", type=float, default=2.0, help="refinement sweeps are ceil(c ln n)")
    p.add_argument("--seed", type=int, default=None, help="ml: random tie-breaking; alg1: power-iteration start")
    p.add_argument("--sequential", action="store_true", help="alg1: in-place flips instead of synchronous sweeps")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sample", help="draw a measurement file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--kind", choices=("h", "p"), required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float)
    grp.add_argument("--edges", type=float, help="expected edge count p*C(n,d)")
    p.add_argument("--truth", help="label bit-string; random if omitted")
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--plot-script", help="write a standalone matplotlib script here")
    p.add_argument("--figure", help="render a PNG here")
    p.add_argument("--x", choices=("multiplier", "d"), default="multiplier", help="x axis for plots")
    p.add_argument("--seed", type=int, default=None, help="override master_seed from the config")
    p.add_argument("--timing", action="store_true", help="fill the seconds column (breaks byte-identical reruns)")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GCBMError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
