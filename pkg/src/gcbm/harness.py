"""Monte Carlo sweeps over normalized sample complexity.

Each grid point is a curve (kind, n, d, theta) and a multiplier. The
expected edge count at that point is ``multiplier * normalizer``, where the
normalizer is one of:

* ``theorem``: the constant-d homogeneity or parity threshold;
* ``max``: ``max(n, n log n / d)``, used for noiseless parity;
* ``linear``: ``n``, so that ``multiplier`` is edges per node.

Every trial is seeded from a hash of its coordinates, so results do not
depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .combinatorics import log_binom
from .decoders import (
    ML_MAX_NODES,
    SpectralConfig,
    decode_algorithm1,
    decode_ml_exhaustive,
    decode_parity_noiseless,
)
from .errors import ConfigurationError, DecodeFailure
from .limits import homogeneity_threshold, linear_normalizer, parity_threshold
from .model import (
    LabelVector,
    MeasurementKind,
    ModelParams,
    recovery_success,
    sample_measurements,
)

__all__ = [
    "METHODS",
    "NORMALIZATIONS",
    "CSV_COLUMNS",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "trial_seed",
    "normalizer",
    "run_sweep",
    "emit_csv",
    "load_csv",
    "parse_config",
    "read_config",
    "monotonicity_violations",
]

METHODS = ("ml", "gf2", "alg1")
NORMALIZATIONS = ("auto", "theorem", "max", "linear")
CSV_COLUMNS = ("kind", "n", "d", "theta", "multiplier", "mean_samples", "successes", "trials", "rate", "seconds")


@dataclass(frozen=True)
class SweepSpec:
    kind: MeasurementKind
    ns: tuple[int, ...]
    ds: tuple[int, ...]
    thetas: tuple[float, ...]
    multipliers: tuple[float, ...]
    trials: int
    method: str
    master_seed: int = 0
    normalization: str = "auto"
    balanced: bool = False
    c: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasurementKind.parse(self.kind))
        for name, cast in (("ns", int), ("ds", int), ("thetas", float), ("multipliers", float)):
            values = tuple(cast(v) for v in getattr(self, name))
            if not values:
                raise ConfigurationError(f"{name} must be non-empty")
            object.__setattr__(self, name, values)
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigurationError(f"normalization must be one of {NORMALIZATIONS}")
        if self.master_seed < 0:
            raise ConfigurationError("master_seed must be non-negative")
        if self.c <= 0:
            raise ConfigurationError("c must be positive")
        if any(m < 0 for m in self.multipliers):
            raise ConfigurationError("multipliers must be non-negative")
        if any(not (0.0 <= t < 0.5) for t in self.thetas):
            raise ConfigurationError("theta must lie in [0, 1/2)")
        for n in self.ns:
            for d in self.ds:
                if d < 2 or 2 * d > n:
                    raise ConfigurationError(f"need 2 <= d <= n/2, got n={n}, d={d}")
        if self.method == "alg1" and self.kind is not MeasurementKind.HOMOGENEITY:
            raise ConfigurationError("alg1 requires homogeneity measurements")
        if self.method == "gf2":
            if self.kind is not MeasurementKind.PARITY:
                raise ConfigurationError("gf2 requires parity measurements")
            if any(t != 0.0 for t in self.thetas):
                raise ConfigurationError("gf2 requires theta = 0")
        if self.method == "ml" and max(self.ns) > ML_MAX_NODES:
            raise ConfigurationError(f"ml is limited to n <= {ML_MAX_NODES}")
        for point in self.points():
            if _log_p(self, *point) > 0.0:
                raise ConfigurationError(f"grid point {point} needs p > 1")

    @property
    def resolved_normalization(self) -> str:
        if self.normalization != "auto":
            return self.normalization
        return "max" if self.method == "gf2" else "theorem"

    def points(self) -> list[tuple[int, int, float, float]]:
        """Grid points in row order."""
        return [
            (n, d, t, m)
            for n in sorted(set(self.ns))
            for d in sorted(set(self.ds))
            for t in sorted(set(self.thetas))
            for m in sorted(set(self.multipliers))
        ]


def normalizer(kind: MeasurementKind, n: int, d: int, theta: float, mode: str) -> float:
    """Edge count that a multiplier of 1 stands for."""
    if mode == "theorem":
        fn = homogeneity_threshold if kind is MeasurementKind.HOMOGENEITY else parity_threshold
        return fn(n, d, theta).sample_complexity_limit
    if mode == "max":
        return linear_normalizer(n, d)
    if mode == "linear":
        return float(n)
    raise ConfigurationError(f"unresolved normalization {mode!r}")


def _log_p(spec: SweepSpec, n: int, d: int, theta: float, mult: float) -> float:
    if mult == 0.0:
        return -math.inf
    base = normalizer(spec.kind, n, d, theta, spec.resolved_normalization)
    return math.log(mult) + math.log(base) - log_binom(n, d)


@dataclass(frozen=True)
class SweepRow:
    kind: str
    n: int
    d: int
    theta: float
    multiplier: float
    mean_samples: float
    successes: int
    trials: int
    rate: float
    seconds: float | None = None

    @property
    def curve(self) -> tuple[str, int, int, float]:
        return (self.kind, self.n, self.d, self.theta)


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def curves(self) -> dict[tuple, list[SweepRow]]:
        out: dict[tuple, list[SweepRow]] = {}
        for row in self.rows:
            out.setdefault(row.curve, []).append(row)
        return out

    def rate(self, n: int, d: int, theta: float, multiplier: float) -> float:
        for row in self.rows:
            if (row.n, row.d, row.theta, row.multiplier) == (n, d, theta, multiplier):
                return row.rate
        raise KeyError((n, d, theta, multiplier))


def trial_seed(master_seed: int, kind: MeasurementKind, n: int, d: int, theta: float, mult: float, trial: int) -> int:
    """64-bit seed from the trial's coordinates."""
    key = f"{master_seed}|{kind.value}|{n}|{d}|{theta!r}|{mult!r}|{trial}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _decode(spec: SweepSpec, ms):
    if spec.method == "ml":
        return decode_ml_exhaustive(ms)
    if spec.method == "gf2":
        return decode_parity_noiseless(ms)
    return decode_algorithm1(ms, SpectralConfig(), c=spec.c)


def _run_trials(spec: SweepSpec, point: tuple, trials: Sequence[int]) -> tuple[int, int, float]:
    """Run a block of trials; returns (successes, total edges, seconds)."""
    n, d, theta, mult = point
    p = math.exp(_log_p(spec, *point))
    params = ModelParams(n, d, p, theta, spec.kind)
    successes = edges = 0
    start = time.perf_counter()
    for t in trials:
        seed = trial_seed(spec.master_seed, spec.kind, n, d, theta, mult, t)
        truth_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
        truth = LabelVector.random(n, truth_rng, balanced=spec.balanced)
        ms = sample_measurements(params, truth, seed)
        edges += len(ms)
        try:
            estimate = _decode(spec, ms).estimate
        except DecodeFailure:
            continue
        successes += recovery_success(spec.kind, d, truth, estimate)
    return successes, edges, time.perf_counter() - start


def _run_task(args):
    return _run_trials(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1, chunk: int = 10) -> SweepResult:
    """Run every grid point; ``jobs > 1`` spreads trial blocks over processes."""
    if jobs < 1:
        raise ConfigurationError("jobs must be >= 1")
    points = spec.points()
    tasks = []
    for idx, point in enumerate(points):
        for lo in range(0, spec.trials, chunk):
            tasks.append((idx, (spec, point, range(lo, min(lo + chunk, spec.trials)))))
    if jobs == 1:
        outputs = [_run_task(args) for _, args in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_run_task, [args for _, args in tasks]))
    totals = [[0, 0, 0.0] for _ in points]
    for (idx, _), (succ, edges, secs) in zip(tasks, outputs):
        totals[idx][0] += succ
        totals[idx][1] += edges
        totals[idx][2] += secs
    rows = [
        SweepRow(
            kind=spec.kind.value,
            n=n,
            d=d,
            theta=theta,
            multiplier=mult,
            mean_samples=edges / spec.trials,
            successes=succ,
            trials=spec.trials,
            rate=succ / spec.trials,
            seconds=secs,
        )
        for (n, d, theta, mult), (succ, edges, secs) in zip(points, totals)
    ]
    return SweepResult(rows)


def monotonicity_violations(result: SweepResult, min_trials: int = 50) -> list[tuple]:
    """Curves whose rate at the top multiplier is below the rate at the bottom."""
    bad = []
    for curve, rows in result.curves().items():
        if len(rows) < 2 or rows[0].trials < min_trials:
            continue
        if rows[-1].rate < rows[0].rate:
            bad.append(curve)
    return bad


# -- CSV -----------------------------------------------------------------------


def emit_csv(result: SweepResult, path: str | Path, timing: bool = False) -> None:
    """Write one row per grid point.

    Wall time is left blank unless ``timing`` is set, so reruns of the same
    spec produce byte-identical files.
    """
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in result.rows:
                secs = f"{r.seconds:.3f}" if timing and r.seconds is not None else ""
                writer.writerow(
                    [r.kind, r.n, r.d, repr(r.theta), repr(r.multiplier), repr(r.mean_samples),
                     r.successes, r.trials, repr(r.rate), secs]
                )
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def load_csv(path: str | Path) -> SweepResult:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ConfigurationError(f"{path}: unexpected header {reader.fieldnames}")
            rows = [
                SweepRow(
                    kind=rec["kind"],
                    n=int(rec["n"]),
                    d=int(rec["d"]),
                    theta=float(rec["theta"]),
                    multiplier=float(rec["multiplier"]),
                    mean_samples=float(rec["mean_samples"]),
                    successes=int(rec["successes"]),
                    trials=int(rec["trials"]),
                    rate=float(rec["rate"]),
                    seconds=float(rec["seconds"]) if rec["seconds"] else None,
                )
                for rec in reader
            ]
    except OSError as exc:
        raise OSError(f"cannot read CSV from {path}: {exc}") from exc
    return SweepResult(rows)


# -- config files --------------------------------------------------------------

_LIST_KEYS = {"n": "ns", "ns": "ns", "d": "ds", "ds": "ds", "theta": "thetas", "thetas": "thetas",
              "multipliers": "multipliers", "multiplier": "multipliers"}
_SCALAR_KEYS = {"kind", "trials", "method", "master_seed", "normalization", "balanced", "c"}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


def _parse_list(text: str) -> list[str]:
    """Comma-separated values; ``a:b`` and ``a:b:step`` expand to integer ranges."""
    out: list[str] = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        if ":" in item:
            parts = [int(x) for x in item.split(":")]
            if len(parts) not in (2, 3):
                raise ConfigurationError(f"bad range {item!r}")
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            out.extend(str(v) for v in range(lo, hi + 1, step))
        else:
            out.append(item)
    return out


def parse_config(text: str, **overrides) -> SweepSpec:
    """Build a SweepSpec from ``key = value`` lines; ``#`` starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key in _LIST_KEYS:
            values[_LIST_KEYS[key]] = _parse_list(value)
        elif key in _SCALAR_KEYS:
            values[key] = value
        else:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    missing = {"kind", "ns", "ds", "thetas", "multipliers", "method"} - values.keys()
    if missing:
        raise ConfigurationError(f"config missing {sorted(missing)}")
    if "trials" not in values:
        kind = MeasurementKind.parse(values["kind"])
        values["trials"] = 100 if kind is MeasurementKind.HOMOGENEITY else 50
    try:
        spec_args = dict(
            kind=values["kind"],
            ns=values["ns"],
            ds=values["ds"],
            thetas=values["thetas"],
            multipliers=values["multipliers"],
            trials=int(values["trials"]),
            method=str(values["method"]).lower(),
            master_seed=int(values.get("master_seed", 0)),
            normalization=str(values.get("normalization", "auto")).lower(),
            balanced=values["balanced"] if isinstance(values.get("balanced"), bool)
            else _parse_bool(str(values.get("balanced", "false"))),
            c=float(values.get("c", 2.0)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from exc
    return SweepSpec(**spec_args)


def read_config(path: str | Path, **overrides) -> SweepSpec:
    return parse_config(Path(path).read_text(), **overrides)

