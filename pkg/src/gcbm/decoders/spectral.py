"""Spectral initialization from the pairwise co-occurrence matrix.

``A[u, v]`` sums the observed labels of sampled edges containing both
``u`` and ``v``; the diagonal is zero. After subtracting the mean entry,
the leading eigenvector is found by power iteration and split by sign.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigurationError, DegenerateInputError
from ..model import LabelVector, MeasurementKind, MeasurementSet
from .base import SpectralConfig


def cooccurrence_matrix(ms: MeasurementSet) -> sp.csr_matrix:
    n, m = ms.n, len(ms)
    cols = np.repeat(np.arange(m), ms.d)
    inc = sp.csr_matrix(
        (np.ones(m * ms.d), (ms.edges.ravel(), cols)), shape=(n, m)
    )
    a = (inc @ sp.diags(ms.labels.astype(float)) @ inc.T).tocsr()
    a.setdiag(0.0)
    a.eliminate_zeros()
    return a


def _power_iteration(matvec, n: int, cfg: SpectralConfig, rng: np.random.Generator):
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(cfg.power_iterations):
        u = matvec(v)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0, v
        u /= norm
        done = abs(1.0 - abs(float(u @ v))) < cfg.tolerance
        v = u
        if done:
            break
    return float(v @ matvec(v)), v


def leading_eigenvector(ms: MeasurementSet, cfg: SpectralConfig) -> np.ndarray:
    """Top (algebraic) eigenvector of the mean-centred co-occurrence matrix."""
    n = ms.n
    a = cooccurrence_matrix(ms)
    mean = a.sum() / float(n * n)

    def centred(v):
        return a @ v - mean * v.sum()

    rng = np.random.default_rng(cfg.seed)
    sigma, v = _power_iteration(centred, n, cfg, rng)
    if cfg.deflation and sigma < 0:
        # dominant eigenvalue is negative; shift it to zero and rerun
        _, v = _power_iteration(lambda x: centred(x) - sigma * x, n, cfg, rng)
    return v


def spectral_init(ms: MeasurementSet, cfg: SpectralConfig | None = None) -> LabelVector:
    cfg = cfg or SpectralConfig()
    if ms.kind is not MeasurementKind.HOMOGENEITY:
        raise ConfigurationError("spectral initialization needs homogeneity measurements")
    if len(ms) == 0:
        raise DegenerateInputError("no sampled edges")
    v = leading_eigenvector(ms, cfg)
    return LabelVector((v > 0).astype(np.uint8))
