"""Maximum-likelihood decoding by enumerating every candidate labeling.

Candidates are encoded as integers with node 0 in the most significant
bit, so the integer order is the lexicographic order on label vectors.
"""

from __future__ import annotations

import numpy as np

from ..errors import BudgetExceededError
from ..model import LabelVector, MeasurementKind, MeasurementSet
from .base import DecodeResult

ML_MAX_NODES = 24
# candidates x edges evaluated per block
_BLOCK_CELLS = 1 << 22


def _edge_masks(ms: MeasurementSet) -> np.ndarray:
    shifts = (ms.n - 1 - ms.edges).astype(np.int64)
    return np.bitwise_or.reduce(np.left_shift(np.int64(1), shifts), axis=1) if len(ms) else np.zeros(0, np.int64)


def _int_to_labels(value: int, n: int) -> LabelVector:
    return LabelVector([(value >> (n - 1 - i)) & 1 for i in range(n)])


def objective_table(ms: MeasurementSet, candidates: np.ndarray) -> np.ndarray:
    """Hamming objective of each integer-encoded candidate."""
    masks = _edge_masks(ms)
    y = ms.labels.astype(bool)
    out = np.zeros(candidates.shape[0], dtype=np.int64)
    if masks.size == 0:
        return out
    step = max(1, _BLOCK_CELLS // masks.size)
    for start in range(0, candidates.shape[0], step):
        block = candidates[start : start + step, None] & masks[None, :]
        if ms.kind is MeasurementKind.PARITY:
            f = (np.bitwise_count(block) & 1).astype(bool)
        else:
            f = (block == 0) | (block == masks[None, :])
        out[start : start + step] = np.count_nonzero(f != y, axis=1)
    return out


def decode_ml_exhaustive(
    ms: MeasurementSet, random_ties: bool = False, seed: int | None = None
) -> DecodeResult:
    """Global minimizer of the Hamming objective over all labelings.

    When the measurement is complement invariant only labelings with node 0
    set to 0 are searched. Ties go to the lexicographically smallest
    minimizer unless ``random_ties`` is set, in which case a seeded uniform
    choice among minimizers is made.
    """
    n = ms.n
    if n > ML_MAX_NODES:
        raise BudgetExceededError(f"exhaustive ML limited to n <= {ML_MAX_NODES}, got {n}")
    symmetric = ms.kind.complement_invariant(ms.d)
    space = 1 << (n - 1 if symmetric else n)
    candidates = np.arange(space, dtype=np.int64)
    dh = objective_table(ms, candidates)
    best = int(dh.min())
    minimizers = np.flatnonzero(dh == best)
    if random_ties:
        choice = int(minimizers[np.random.default_rng(seed).integers(minimizers.size)])
    else:
        choice = int(minimizers[0])
    estimate = _int_to_labels(choice, n)
    return DecodeResult(
        estimate=estimate,
        objective=best,
        iterations=0,
        flips_last_sweep=0,
        method="ml",
        tie_broken=minimizers.size > 1,
    )
