"""Generalized censored block model: labels, hyperedges, sampling and the
Hamming objective.

Node indices are 0-based everywhere. A measurement set stores its edges as
an ``(m, d)`` integer array with each row sorted ascending and rows in
lexicographic order, which is the canonical edge order used for noise
draws and serialization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError

__all__ = [
    "MeasurementKind",
    "LabelVector",
    "Hyperedge",
    "ModelParams",
    "MeasurementSet",
    "measure",
    "evaluate_edges",
    "sample_measurements",
    "hamming_objective",
    "recovery_success",
    "write_measurements",
    "read_measurements",
    "format_measurements",
    "parse_measurements",
]

# Below this many d-subsets the sampler draws one Bernoulli(p) per subset.
ENUMERATION_LIMIT = 200_000
# Refuse to materialize more sampled edges than this.
MAX_SAMPLED_EDGES = 50_000_000


class MeasurementKind(enum.Enum):
    HOMOGENEITY = "h"
    PARITY = "p"

    @classmethod
    def parse(cls, value: "MeasurementKind | str") -> "MeasurementKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise DomainError(f"unknown measurement kind {value!r}")

    def complement_invariant(self, d: int) -> bool:
        """Whether ``f(v) == f(~v)`` for every ``v`` of length ``d``."""
        return self is MeasurementKind.HOMOGENEITY or d % 2 == 0


class LabelVector:
    """Immutable binary community assignment of length ``n``."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.array(bits, dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise DomainError("label entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def zeros(cls, n: int) -> "LabelVector":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "LabelVector":
        return cls(np.ones(n, dtype=np.uint8))

    @classmethod
    def from_string(cls, text: str) -> "LabelVector":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise DomainError(f"not a bit string: {text!r}")
        return cls([int(ch) for ch in text])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, balanced: bool = False) -> "LabelVector":
        if balanced:
            bits = np.zeros(n, dtype=np.uint8)
            bits[rng.permutation(n)[: n // 2]] = 1
            return cls(bits)
        return cls(rng.integers(0, 2, size=n, dtype=np.uint8))

    @property
    def bits(self) -> np.ndarray:
        """Read-only ``uint8`` view of the labels."""
        return self._bits

    def packed(self) -> bytes:
        return np.packbits(self._bits).tobytes()

    def complement(self) -> "LabelVector":
        return LabelVector(self._bits ^ 1)

    def flip(self, i: int) -> "LabelVector":
        """Return ``self xor e_i``."""
        bits = self._bits.copy()
        bits[i] ^= 1
        return LabelVector(bits)

    def weight(self) -> int:
        return int(self._bits.sum())

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def __xor__(self, other: "LabelVector") -> "LabelVector":
        if len(self) != len(other):
            raise DomainError("length mismatch")
        return LabelVector(self._bits ^ other._bits)

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelVector):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((len(self), self.packed()))

    def __repr__(self) -> str:
        return f"LabelVector('{self.to_string()}')"


class Hyperedge(tuple):
    """A strictly increasing tuple of node indices."""

    def __new__(cls, nodes: Iterable[int]):
        nodes = tuple(int(v) for v in nodes)
        if len(nodes) < 2:
            raise DomainError("a hyperedge needs at least two nodes")
        if nodes[0] < 0 or any(a >= b for a, b in zip(nodes, nodes[1:])):
            raise DomainError(f"hyperedge must be strictly increasing and non-negative: {nodes}")
        return super().__new__(cls, nodes)

    @classmethod
    def canonical(cls, nodes: Iterable[int]) -> "Hyperedge":
        """Sort first; still rejects repeated nodes."""
        return cls(sorted(int(v) for v in nodes))


@dataclass(frozen=True)
class ModelParams:
    n: int
    d: int
    p: float
    theta: float
    kind: MeasurementKind

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasurementKind.parse(self.kind))
        if not (2 <= self.d <= self.n):
            raise DomainError(f"need 2 <= d <= n, got n={self.n}, d={self.d}")
        if not (0.0 <= self.p <= 1.0):
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if not (0.0 <= self.theta < 0.5):
            raise DomainError(f"theta must lie in [0, 1/2), got {self.theta}")

    @property
    def expected_edges(self) -> float:
        return self.p * math.comb(self.n, self.d)


def measure(kind: MeasurementKind | str, values: Sequence[int]) -> int:
    """Noiseless measurement of one hyperedge's labels."""
    kind = MeasurementKind.parse(kind)
    if len(values) < 2:
        raise DomainError(f"measurement needs at least 2 values, got {len(values)}")
    if kind is MeasurementKind.HOMOGENEITY:
        return int(all(v == values[0] for v in values))
    out = 0
    for v in values:
        out ^= int(v) & 1
    return out


def evaluate_edges(kind: MeasurementKind, labels: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Vectorized :func:`measure` over the rows of ``edges``."""
    if edges.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    s = labels[edges].sum(axis=1, dtype=np.int64)
    if kind is MeasurementKind.HOMOGENEITY:
        return ((s == 0) | (s == edges.shape[1])).astype(np.uint8)
    return (s & 1).astype(np.uint8)


def _canonical_rows(edges: np.ndarray) -> np.ndarray:
    if edges.shape[0] == 0:
        return edges
    order = np.lexsort(edges.T[::-1])
    return edges[order]


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Sampled hyperedges with their observed labels.

    ``edges`` is an ``(m, d)`` array in canonical order; ``labels[k]`` is the
    observation on ``edges[k]``.
    """

    params: ModelParams
    edges: np.ndarray
    labels: np.ndarray
    seed: int = 0
    _validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        n, d = self.params.n, self.params.d
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, d)
        labels = np.asarray(self.labels, dtype=np.uint8).reshape(-1)
        if edges.shape[0] != labels.shape[0]:
            raise DomainError("edges and labels differ in length")
        if not self._validated and edges.shape[0]:
            if edges.min() < 0 or edges.max() >= n:
                raise DomainError("edge index out of range")
            if np.any(np.diff(edges, axis=1) <= 0):
                raise DomainError("edge rows must be strictly increasing")
            if labels.max() > 1:
                raise DomainError("labels must be bits")
            order = np.lexsort(edges.T[::-1])
            edges, labels = edges[order], labels[order]
            if np.any(np.all(edges[1:] == edges[:-1], axis=1)):
                raise DomainError("duplicate hyperedge")
        edges.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_pairs(
        cls,
        params: ModelParams,
        pairs: Iterable[tuple[Iterable[int], int]],
        seed: int = 0,
    ) -> "MeasurementSet":
        rows, labels = [], []
        for nodes, y in pairs:
            edge = Hyperedge(nodes)
            if len(edge) != params.d:
                raise DomainError(f"edge {edge} does not have {params.d} nodes")
            rows.append(edge)
            labels.append(int(y))
        return cls(params, np.array(rows, dtype=np.int64).reshape(-1, params.d), np.array(labels), seed)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def kind(self) -> MeasurementKind:
        return self.params.kind

    def __len__(self) -> int:
        return int(self.edges.shape[0])

    def __iter__(self) -> Iterator[tuple[Hyperedge, int]]:
        for row, y in zip(self.edges, self.labels):
            yield Hyperedge(row), int(y)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MeasurementSet):
            return NotImplemented
        return (
            self.params == other.params
            and self.seed == other.seed
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.labels, other.labels)
        )

    @cached_property
    def degrees(self) -> np.ndarray:
        """Number of sampled edges incident to each node."""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @cached_property
    def incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR-style ``(indptr, edge_ids)`` listing the edges incident to each node."""
        flat = self.edges.ravel()
        edge_ids = np.repeat(np.arange(len(self)), self.d)
        order = np.argsort(flat, kind="stable")
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        return indptr, edge_ids[order]


def _all_subsets(n: int, d: int) -> np.ndarray:
    rows = np.fromiter(
        (v for comb in combinations(range(n), d) for v in comb),
        dtype=np.int64,
        count=math.comb(n, d) * d,
    )
    return rows.reshape(-1, d)


def _draw_distinct_subsets(n: int, d: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` distinct uniform d-subsets of ``range(n)`` by rejection."""
    kept = np.zeros((0, d), dtype=np.int64)
    by_collision = d * (d - 1) < n
    while kept.shape[0] < m:
        need = m - kept.shape[0]
        batch = need + need // 8 + 16
        if by_collision:
            rows = np.sort(rng.integers(0, n, size=(batch, d)), axis=1)
            rows = rows[np.all(np.diff(rows, axis=1) > 0, axis=1)]
        else:
            batch = min(batch, max(1, 4_000_000 // n))
            keys = rng.random((batch, n))
            rows = np.sort(np.argpartition(keys, d - 1, axis=1)[:, :d], axis=1).astype(np.int64)
        pool = np.concatenate([kept, rows])
        # keep first occurrences in draw order so truncation stays uniform
        _, first = np.unique(pool, axis=0, return_index=True)
        kept = pool[np.sort(first)]
    return kept[:m]


def sample_measurements(params: ModelParams, truth: LabelVector, seed: int) -> MeasurementSet:
    """Sample a measurement hypergraph and its noisy labels.

    Every d-subset is kept independently with probability ``p``. When the
    number of subsets is small they are enumerated directly; otherwise the
    edge count is drawn as Binomial(C(n, d), p) and that many distinct
    subsets are drawn uniformly. Noise bits are drawn afterwards, one per
    edge in canonical order, so the edge set does not depend on ``theta``.
    """
    n, d, p = params.n, params.d, params.p
    if len(truth) != n:
        raise DomainError(f"truth has length {len(truth)}, expected {n}")
    rng = np.random.default_rng(seed)
    total = math.comb(n, d)
    if p == 0.0:
        edges = np.zeros((0, d), dtype=np.int64)
    elif total <= ENUMERATION_LIMIT:
        everything = _all_subsets(n, d)
        edges = everything[rng.random(total) < p]
    else:
        if total < 2**62:
            m = int(rng.binomial(total, p))
        else:
            # C(n, d) exceeds int64; Poisson matches the binomial's mean
            m = int(rng.poisson(math.exp(math.log(p) + _log_comb(n, d))))
        if m > MAX_SAMPLED_EDGES:
            raise BudgetExceededError(f"{m} sampled edges exceeds cap {MAX_SAMPLED_EDGES}")
        edges = _canonical_rows(_draw_distinct_subsets(n, d, m, rng))
    noise = (rng.random(edges.shape[0]) < params.theta).astype(np.uint8)
    labels = evaluate_edges(params.kind, truth.bits, edges) ^ noise
    return MeasurementSet(params, edges, labels, int(seed), _validated=True)


def _log_comb(n: float, k: float) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hamming_objective(ms: MeasurementSet, candidate: LabelVector) -> int:
    """Number of sampled edges whose label disagrees with ``candidate``."""
    if len(candidate) != ms.n:
        raise DomainError(f"candidate has length {len(candidate)}, expected {ms.n}")
    f = evaluate_edges(ms.kind, candidate.bits, ms.edges)
    return int(np.count_nonzero(f != ms.labels))


def recovery_success(
    kind: MeasurementKind | str, d: int, truth: LabelVector, estimate: LabelVector
) -> bool:
    """Exact recovery, up to global complement when the measurement allows it.

    Odd-d parity flips every measurement under complement, so there the
    estimate must equal the truth exactly.
    """
    if len(truth) != len(estimate):
        raise DomainError("length mismatch")
    if estimate == truth:
        return True
    return MeasurementKind.parse(kind).complement_invariant(d) and estimate == truth.complement()


# -- serialization -----------------------------------------------------------

_HEADER_KEYS = ("n", "d", "p", "theta", "kind", "seed")


def format_measurements(ms: MeasurementSet) -> str:
    prm = ms.params
    lines = [
        f"gcbm v1 n={prm.n} d={prm.d} p={prm.p!r} theta={prm.theta!r} "
        f"kind={prm.kind.value} seed={ms.seed}"
    ]
    for row, y in zip(ms.edges.tolist(), ms.labels.tolist()):
        lines.append(" ".join(map(str, row)) + f"\t{y}")
    return "\n".join(lines) + "\n"


def parse_measurements(text: str) -> MeasurementSet:
    lines = text.splitlines()
    if not lines:
        raise DomainError("empty measurement file")
    head = lines[0].split()
    if head[:2] != ["gcbm", "v1"]:
        raise DomainError(f"bad header: {lines[0]!r}")
    fields = dict(tok.split("=", 1) for tok in head[2:])
    missing = [k for k in _HEADER_KEYS if k not in fields]
    if missing:
        raise DomainError(f"header missing {missing}")
    params = ModelParams(
        n=int(fields["n"]),
        d=int(fields["d"]),
        p=float(fields["p"]),
        theta=float(fields["theta"]),
        kind=MeasurementKind.parse(fields["kind"]),
    )
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            nodes, y = line.split("\t")
            pairs.append(([int(v) for v in nodes.split()], int(y)))
        except ValueError as exc:
            raise DomainError(f"line {lineno}: cannot parse {line!r}") from exc
    return MeasurementSet.from_pairs(params, pairs, seed=int(fields["seed"]))


def write_measurements(ms: MeasurementSet, path: str | Path) -> None:
    Path(path).write_text(format_measurements(ms))


def read_measurements(path: str | Path) -> MeasurementSet:
    return parse_measurements(Path(path).read_text())
