"""Noiseless parity decoding by Gaussian elimination over GF(2).

Rows are packed into ``uint64`` words (bit ``c % 64`` of word ``c // 64``
holds the coefficient of unknown ``c``).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..errors import ConfigurationError, InconsistentSystemError, RankDeficitError
from ..model import LabelVector, MeasurementKind, MeasurementSet, hamming_objective
from .base import DecodeResult

_ONE = np.uint64(1)


def pack_rows(edges: np.ndarray, n: int) -> np.ndarray:
    """Coefficient matrix with one packed row per hyperedge."""
    m = edges.shape[0]
    words = (n + 63) // 64
    rows = np.zeros((m, words), dtype=np.uint64)
    if m:
        r = np.repeat(np.arange(m), edges.shape[1])
        flat = edges.ravel()
        np.bitwise_or.at(rows, (r, flat >> 6), np.left_shift(_ONE, (flat & 63).astype(np.uint64)))
    return rows


def _bit(rows: np.ndarray, col: int) -> np.ndarray:
    return (rows[:, col >> 6] >> np.uint64(col & 63)) & _ONE


class EchelonForm(NamedTuple):
    rows: np.ndarray  # reduced rows; the first ``rank`` are pivot rows
    rhs: np.ndarray
    pivots: list[int]  # pivot column of each pivot row

    @property
    def rank(self) -> int:
        return len(self.pivots)


def eliminate(rows: np.ndarray, rhs: np.ndarray, n: int) -> EchelonForm:
    """Gauss-Jordan elimination; pivot on the first row with the column bit set."""
    rows = rows.copy()
    rhs = rhs.astype(np.uint8).copy()
    m = rows.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        w = col >> 6
        shift = np.uint64(col & 63)
        below = np.flatnonzero((rows[r:, w] >> shift) & _ONE)
        if below.size == 0:
            continue
        piv = r + int(below[0])
        if piv != r:
            rows[[r, piv]] = rows[[piv, r]]
            rhs[[r, piv]] = rhs[[piv, r]]
        hit = np.flatnonzero((rows[:, w] >> shift) & _ONE)
        hit = hit[hit != r]
        if hit.size:
            rows[hit] ^= rows[r]
            rhs[hit] ^= rhs[r]
        pivots.append(col)
        r += 1
    return EchelonForm(rows, rhs, pivots)


def particular_solution(ech: EchelonForm, n: int) -> np.ndarray:
    """Solution with every free variable set to 0; raises if inconsistent."""
    if np.any(ech.rhs[ech.rank :]):
        raise InconsistentSystemError("parity system has no solution")
    x = np.zeros(n, dtype=np.uint8)
    x[ech.pivots] = ech.rhs[: ech.rank]
    return x


def kernel_basis(ech: EchelonForm, n: int) -> list[np.ndarray]:
    """One kernel vector per free column of the reduced system."""
    pivot_set = set(ech.pivots)
    basis = []
    top = ech.rows[: ech.rank]
    for free in range(n):
        if free in pivot_set:
            continue
        v = np.zeros(n, dtype=np.uint8)
        v[free] = 1
        if ech.rank:
            v[ech.pivots] = _bit(top, free).astype(np.uint8)
        basis.append(v)
    return basis


def decode_parity_noiseless(ms: MeasurementSet) -> DecodeResult:
    """Solve ``xor_{i in E} x_i = Y_E`` for every sampled edge.

    A one-dimensional kernel spanned by the all-ones vector (even d) is the
    expected complement ambiguity; any larger kernel raises
    :class:`RankDeficitError`.
    """
    if ms.kind is not MeasurementKind.PARITY:
        raise ConfigurationError("GF(2) decoding needs parity measurements")
    n = ms.n
    ech = eliminate(pack_rows(ms.edges, n), ms.labels, n)
    x = particular_solution(ech, n)
    dim = n - ech.rank
    if dim > 1:
        raise RankDeficitError(dim)
    if dim == 1:
        (v,) = kernel_basis(ech, n)
        if not (ms.d % 2 == 0 and v.all()):
            raise RankDeficitError(dim)
    estimate = LabelVector(x)
    return DecodeResult(
        estimate=estimate,
        objective=hamming_objective(ms, estimate),
        iterations=0,
        flips_last_sweep=0,
        method="gf2",
        tie_broken=False,
    )
