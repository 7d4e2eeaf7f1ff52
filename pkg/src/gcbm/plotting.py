"""Success-rate curves from sweep results, as PNGs or standalone scripts."""

from __future__ import annotations

from pathlib import Path

from .errors import DegenerateInputError
from .harness import SweepResult

__all__ = ["curve_groups", "emit_plot_script", "render_figure"]

X_AXES = ("multiplier", "d")

_XLABEL = {
    "multiplier": "normalized sample complexity",
    "d": "hyperedge size d",
}


def _key_fields(x: str) -> tuple[str, ...]:
    if x == "multiplier":
        return ("kind", "n", "d", "theta")
    if x == "d":
        return ("kind", "n", "theta", "multiplier")
    raise ValueError(f"x must be one of {X_AXES}, got {x!r}")


def curve_groups(result: SweepResult, x: str = "multiplier") -> dict[tuple, list[tuple[float, float]]]:
    """Map each curve key to its (x, rate) points, sorted by x."""
    keys = _key_fields(x)
    out: dict[tuple, list[tuple[float, float]]] = {}
    for row in result.rows:
        key = tuple(getattr(row, k) for k in keys)
        out.setdefault(key, []).append((float(getattr(row, x)), row.rate))
    return {k: sorted(v) for k, v in out.items()}


def _label(keys: tuple[str, ...], values: tuple) -> str:
    names = {"theta": "θ", "multiplier": "×"}
    return ", ".join(f"{names.get(k, k)}={v}" for k, v in zip(keys, values) if k != "kind")


_SCRIPT_HEAD = '''\
"""Plot empirical success rate from a sweep CSV."""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = {csv_path!r}
OUT_PATH = sys.argv[1] if len(sys.argv) > 1 else {out_path!r}

with open(CSV_PATH, newline="") as fh:
    ROWS = list(csv.DictReader(fh))


def curve(**key):
    pts = [
        (float(r[{x!r}]), float(r["rate"]))
        for r in ROWS
        if all(r[k] == v for k, v in key.items())
    ]
    pts.sort()
    return [p[0] for p in pts], [p[1] for p in pts]


fig, ax = plt.subplots(figsize=(6, 4))
'''

_SCRIPT_TAIL = '''\
ax.set_xlabel({xlabel!r})
ax.set_ylabel("empirical success rate")
ax.set_ylim(-0.02, 1.02)
ax.grid(alpha=0.3)
ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(OUT_PATH, dpi=150)
'''


def emit_plot_script(result: SweepResult, path: str | Path, csv_path: str | Path, x: str = "multiplier") -> None:
    """Write a matplotlib script that reads ``csv_path`` and draws one curve per parameter combination."""
    if not result.rows:
        raise DegenerateInputError("nothing to plot: sweep result is empty")
    keys = _key_fields(x)
    path = Path(path)
    lines = [_SCRIPT_HEAD.format(csv_path=str(csv_path), out_path=str(path.with_suffix(".png")), x=x)]
    for values in curve_groups(result, x):
        # match on the CSV's own text so float formatting round-trips
        row = next(r for r in result.rows if tuple(getattr(r, k) for k in keys) == values)
        key = {k: _csv_text(getattr(row, k)) for k in keys}
        args = ", ".join(f"{k}={v!r}" for k, v in key.items())
        lines.append(f"ax.plot(*curve({args}), marker='o', label={_label(keys, values)!r})\n")
    lines.append(_SCRIPT_TAIL.format(xlabel=_XLABEL[x]))
    try:
        path.write_text("".join(lines))
    except OSError as exc:
        raise OSError(f"cannot write plot script to {path}: {exc}") from exc


def _csv_text(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def render_figure(result: SweepResult, path: str | Path, x: str = "multiplier") -> None:
    """Draw the success-rate curves straight to an image file."""
    if not result.rows:
        raise DegenerateInputError("nothing to plot: sweep result is empty")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    keys = _key_fields(x)
    fig, ax = plt.subplots(figsize=(6, 4))
    for values, pts in curve_groups(result, x).items():
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker="o", label=_label(keys, values))
    ax.set_xlabel(_XLABEL[x])
    ax.set_ylabel("empirical success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
