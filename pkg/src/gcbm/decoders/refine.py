"""Local refinement by single-coordinate flips, and the two-stage decoder."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigurationError, DomainError
from ..model import LabelVector, MeasurementKind, MeasurementSet, hamming_objective
from .base import DecodeResult, SpectralConfig
from .spectral import spectral_init


def flip_gains(ms: MeasurementSet, x: np.ndarray) -> np.ndarray:
    """``d_H(x ^ e_i) - d_H(x)`` for every node ``i``.

    Each edge contributes only to its own ``d`` nodes, so the whole vector
    costs one pass over the edges.
    """
    n, d = ms.n, ms.d
    if len(ms) == 0:
        return np.zeros(n, dtype=np.int64)
    vals = x[ms.edges].astype(np.int64)
    s = vals.sum(axis=1)
    y = ms.labels.astype(np.int64)
    if ms.kind is MeasurementKind.HOMOGENEITY:
        f = ((s == 0) | (s == d)).astype(np.int64)
        s_flip = s[:, None] + 1 - 2 * vals
        f_flip = ((s_flip == 0) | (s_flip == d)).astype(np.int64)
    else:
        f = s & 1
        f_flip = np.broadcast_to((1 - f)[:, None], vals.shape)
    before = (f != y).astype(np.int64)
    delta = (f_flip != y[:, None]).astype(np.int64) - before[:, None]
    return np.bincount(ms.edges.ravel(), weights=delta.ravel(), minlength=n).astype(np.int64)


def _node_gain(ms: MeasurementSet, x: np.ndarray, node: int, indptr, edge_ids) -> int:
    ids = edge_ids[indptr[node] : indptr[node + 1]]
    if ids.size == 0:
        return 0
    vals = x[ms.edges[ids]].astype(np.int64)
    s = vals.sum(axis=1)
    y = ms.labels[ids].astype(np.int64)
    xi = int(x[node])
    s_flip = s + 1 - 2 * xi
    if ms.kind is MeasurementKind.HOMOGENEITY:
        f = (s == 0) | (s == ms.d)
        f_flip = (s_flip == 0) | (s_flip == ms.d)
    else:
        f = s & 1
        f_flip = 1 - f
    return int(np.count_nonzero(f_flip != y) - np.count_nonzero(f != y))


def refine(
    ms: MeasurementSet,
    start: LabelVector,
    max_sweeps: int,
    sequential: bool = False,
) -> DecodeResult:
    """Flip node ``i`` whenever ``d_H(x ^ e_i) <= d_H(x)``.

    Sweeps are synchronous: every decision in a sweep is made against the
    same iterate and all flips are applied together. Nodes with no incident
    edge are never flipped, since for them the rule is always an equality.
    Iteration stops early after a sweep with no flips.

    ``sequential=True`` instead applies each flip immediately (a Gauss-Seidel
    style variant; not the synchronous rule).
    """
    if len(start) != ms.n:
        raise DomainError(f"start has length {len(start)}, expected {ms.n}")
    if max_sweeps < 1:
        raise DomainError("max_sweeps must be >= 1")
    x = start.bits.copy()
    active = ms.degrees > 0
    sweeps = flips = 0
    if sequential:
        indptr, edge_ids = ms.incidence
    for _ in range(max_sweeps):
        sweeps += 1
        if sequential:
            flips = 0
            for node in np.flatnonzero(active):
                if _node_gain(ms, x, node, indptr, edge_ids) <= 0:
                    x[node] ^= 1
                    flips += 1
        else:
            mask = (flip_gains(ms, x) <= 0) & active
            flips = int(np.count_nonzero(mask))
            x[mask] ^= 1
        if flips == 0:
            break
    estimate = LabelVector(x)
    return DecodeResult(
        estimate=estimate,
        objective=hamming_objective(ms, estimate),
        iterations=sweeps,
        flips_last_sweep=flips,
        method="refine-sequential" if sequential else "refine",
    )


def refinement_sweeps(n: int, c: float) -> int:
    """``ceil(c * ln n)``, at least one."""
    return max(1, math.ceil(c * math.log(n)))


def decode_algorithm1(
    ms: MeasurementSet,
    cfg: SpectralConfig | None = None,
    c: float = 2.0,
    sequential: bool = False,
) -> DecodeResult:
    """Spectral initialization followed by ``ceil(c ln n)`` refinement sweeps."""
    if ms.kind is not MeasurementKind.HOMOGENEITY:
        raise ConfigurationError("the two-stage decoder needs homogeneity measurements")
    if c <= 0:
        raise DomainError("c must be positive")
    start = spectral_init(ms, cfg)
    res = refine(ms, start, refinement_sweeps(ms.n, c), sequential=sequential)
    return DecodeResult(
        estimate=res.estimate,
        objective=res.objective,
        iterations=res.iterations,
        flips_last_sweep=res.flips_last_sweep,
        method="alg1",
        tie_broken=False,
    )
