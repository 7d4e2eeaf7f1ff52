"""Exact counts of distinctive hyperedges and finite-n checks of the
counting inequalities behind the achievability proofs.

All counts are Python integers. Bounds involving rationals (``delta``,
``alpha``) are compared exactly with :class:`fractions.Fraction`; the
float-valued bound helpers exist for reporting at large ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError
from .model import LabelVector, MeasurementKind, MeasurementSet, evaluate_edges

__all__ = [
    "binom",
    "log_binom",
    "PartitionPerturbation",
    "Check",
    "count_distinctive_homogeneity",
    "count_distinctive_parity",
    "brute_force_distinctive",
    "NkBound",
    "nk_lower_bound",
    "nk_lower_bound_exact",
    "lemma_beta",
    "lemma_alpha",
    "verify_lemma1",
    "verify_lemma4",
    "verify_lemma5",
    "vandermonde_check",
    "residual_independent_set",
]

BRUTE_FORCE_BUDGET = 10**7


def binom(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 whenever b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def log_binom(a: float, b: float) -> float:
    """Natural log of C(a, b) via log-gamma; accepts real arguments."""
    if b < 0 or b > a:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


@dataclass(frozen=True)
class PartitionPerturbation:
    """Ground truth ``(0^k, 1^(n-k))`` and the candidate that flips the first
    ``i`` of the zeros and the first ``j`` of the ones."""

    n: int
    d: int
    k: int
    i: int
    j: int

    def __post_init__(self):
        if not (2 <= self.d <= self.n):
            raise DomainError(f"need 2 <= d <= n, got n={self.n}, d={self.d}")
        if not (0 <= 2 * self.k <= self.n):
            raise DomainError(f"need 0 <= k <= n/2, got k={self.k}")
        if not (0 <= self.i <= self.k and 0 <= self.j <= self.n - self.k):
            raise DomainError(f"flip counts out of range: i={self.i}, j={self.j}")

    def truth(self) -> LabelVector:
        return LabelVector([0] * self.k + [1] * (self.n - self.k))

    def candidate(self) -> LabelVector:
        n, k, i, j = self.n, self.k, self.i, self.j
        return LabelVector([1] * i + [0] * (k - i) + [0] * j + [1] * (n - k - j))


class Check:
    """Outcome of an inequality check; falsy and carrying a witness on failure."""

    __slots__ = ("ok", "witness")

    def __init__(self, ok: bool, witness: tuple | None = None):
        self.ok = bool(ok)
        self.witness = None if ok else witness

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return "Check(ok)" if self.ok else f"Check(counterexample={self.witness})"


def count_distinctive_homogeneity(pp: PartitionPerturbation) -> int:
    """Number of d-subsets on which f_h separates the truth from the candidate."""
    n, d, k, i, j = pp.n, pp.d, pp.k, pp.i, pp.j
    total = 0
    for ell in range(1, d):
        total += binom(i, ell) * binom(k - i, d - ell)
        total += binom(j, ell) * binom(n - k - j, d - ell)
        total += binom(i, ell) * binom(n - k - j, d - ell)
        total += binom(k - i, ell) * binom(j, d - ell)
    return total


def _check_parity_args(n: int, d: int, k: int) -> None:
    if not (2 <= d <= n):
        raise DomainError(f"need 2 <= d <= n, got n={n}, d={d}")
    if not (0 <= k <= n):
        raise DomainError(f"need 0 <= k <= n, got k={k}")


def count_distinctive_parity(n: int, d: int, k: int) -> int:
    """Number of d-subsets meeting the first ``k`` nodes in an odd count."""
    _check_parity_args(n, d, k)
    return sum(binom(k, i) * binom(n - k, d - i) for i in range(1, d + 1, 2))


def _subset_chunks(n: int, d: int, size: int = 200_000) -> Iterator[np.ndarray]:
    it = combinations(range(n), d)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def brute_force_distinctive(
    n: int,
    d: int,
    truth: LabelVector,
    candidate: LabelVector,
    kind: MeasurementKind | str,
) -> int:
    """Enumerate every d-subset and count where f(truth) != f(candidate)."""
    kind = MeasurementKind.parse(kind)
    if not (2 <= d <= n):
        raise DomainError(f"need 2 <= d <= n, got n={n}, d={d}")
    if len(truth) != n or len(candidate) != n:
        raise DomainError("label vectors must have length n")
    if math.comb(n, d) > BRUTE_FORCE_BUDGET:
        raise BudgetExceededError(f"C({n},{d}) exceeds enumeration budget {BRUTE_FORCE_BUDGET}")
    count = 0
    for block in _subset_chunks(n, d):
        a = evaluate_edges(kind, truth.bits, block)
        b = evaluate_edges(kind, candidate.bits, block)
        count += int(np.count_nonzero(a != b))
    return count


def lemma_alpha(n: int, d: int) -> Fraction:
    return Fraction(n - d + 1, d)


def lemma_beta(n: int, d: int) -> int:
    """ceil((n - d + 1) / (2d + 1))."""
    return -((d - n - 1) // (2 * d + 1))


def _check_scaling_args(n: int, d: int, k: int) -> None:
    if not (2 <= d and 2 * d <= n):
        raise DomainError(f"need 2 <= d <= n/2, got n={n}, d={d}")
    if not (1 <= k and 2 * k <= n):
        raise DomainError(f"need 1 <= k <= n/2, got k={k}")


class NkBound(NamedTuple):
    bound: float
    regime: str  # "below-beta" or "above-beta"
    log_bound: float


def nk_lower_bound(n: int, d: int, k: int) -> NkBound:
    """Lower bound on the odd-intersection count N_k, evaluated in log space.

    ``(2k / (5 alpha)) C(n, d)`` when ``k < beta``, else ``C(n, d) / 5``.
    """
    _check_scaling_args(n, d, k)
    if k < lemma_beta(n, d):
        alpha = (n - d + 1) / d
        log_b = math.log(2 * k) - math.log(5 * alpha) + log_binom(n, d)
        return NkBound(math.exp(log_b), "below-beta", log_b)
    log_b = log_binom(n, d) - math.log(5)
    return NkBound(math.exp(log_b), "above-beta", log_b)


def nk_lower_bound_exact(n: int, d: int, k: int) -> Fraction:
    _check_scaling_args(n, d, k)
    if k < lemma_beta(n, d):
        return Fraction(2 * k) / (5 * lemma_alpha(n, d)) * math.comb(n, d)
    return Fraction(math.comb(n, d), 5)


def verify_lemma1(n: int, d: int, k: int, i: int, j: int, delta: float | Fraction) -> Check:
    """Check |F_ij| >= (i + j) (1 - 2 delta)^(d-1) / 2^(d-2) * C(n-1, d-1).

    Both sides are exact; ``delta`` is converted to the rational it denotes
    in decimal (0.1 -> 1/10).
    """
    delta = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    if not (0 < delta < Fraction(1, 2)):
        raise DomainError(f"need 0 < delta < 1/2, got {delta}")
    if not (i < delta * n and j < delta * n):
        raise DomainError(f"hypothesis i, j < delta*n violated: i={i}, j={j}, delta*n={float(delta * n)}")
    pp = PartitionPerturbation(n, d, k, i, j)
    lhs = count_distinctive_homogeneity(pp)
    rhs = (i + j) * (1 - 2 * delta) ** (d - 1) / Fraction(2) ** (d - 2) * binom(n - 1, d - 1)
    return Check(lhs >= rhs, (n, d, k, i, j, float(delta), lhs, float(rhs)))


def _cross(n: int, d: int, k: int, i: int) -> int:
    return binom(k, i) * binom(n - k, d - i)


def verify_lemma4(n: int, d: int, k: int) -> Check:
    """Intermediate terms <= 2 * (intermediate odd terms) + 3 * N_k."""
    if not (2 <= d <= n):
        raise DomainError(f"need 2 <= d <= n, got n={n}, d={d}")
    if not (1 <= k and 2 * k <= n):
        raise DomainError(f"need 1 <= k <= n/2, got k={k}")
    middle = sum(_cross(n, d, k, i) for i in range(1, d))
    middle_odd = sum(_cross(n, d, k, i) for i in range(1, d, 2))
    nk = count_distinctive_parity(n, d, k)
    rhs = 2 * middle_odd + 3 * nk
    return Check(middle <= rhs, (n, d, k, middle, rhs))


def verify_lemma5(n: int, d: int, k: int) -> Check:
    """Boundary terms against boundary odd terms, with factor 2 at k >= beta
    and alpha / k (itself >= 2) below beta."""
    _check_scaling_args(n, d, k)
    boundary = _cross(n, d, k, 0) + _cross(n, d, k, d)
    boundary_odd = _cross(n, d, k, 1) + _cross(n, d, k, d - 1)
    if k >= lemma_beta(n, d):
        factor = Fraction(2)
        ok = boundary <= factor * boundary_odd
    else:
        factor = lemma_alpha(n, d) / k
        ok = factor >= 2 and boundary <= factor * boundary_odd
    return Check(ok, (n, d, k, boundary, boundary_odd, float(factor)))


def vandermonde_check(n: int, d: int, k: int) -> Check:
    """C(n, d) == sum_i C(k, i) C(n-k, d-i)."""
    if not (0 <= k <= n):
        raise DomainError(f"need 0 <= k <= n, got k={k}")
    total = sum(_cross(n, d, k, i) for i in range(0, d + 1))
    return Check(total == binom(n, d), (n, d, k, total, binom(n, d)))


def residual_independent_set(ms: MeasurementSet, big_set: Sequence[int]) -> list[int]:
    """Drop from ``big_set`` every node sharing a sampled edge with another
    member of ``big_set``; order is preserved."""
    nodes = [int(v) for v in big_set]
    if len(set(nodes)) != len(nodes):
        raise DomainError("big_set has duplicates")
    if any(v < 0 or v >= ms.n for v in nodes):
        raise DomainError("big_set index out of range")
    member = np.zeros(ms.n, dtype=bool)
    member[nodes] = True
    if len(ms) == 0:
        return nodes
    hits = member[ms.edges]
    shared = ms.edges[hits.sum(axis=1) >= 2]
    removed = np.zeros(ms.n, dtype=bool)
    removed[shared.ravel()] = True
    return [v for v in nodes if not removed[v]]


# -- exhaustive sweeps ---------------------------------------------------------


@dataclass
class SweepReport:
    """Result of one exhaustive check family."""

    name: str
    cases: int = 0
    counterexamples: list = None

    def __post_init__(self):
        if self.counterexamples is None:
            self.counterexamples = []

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status} {self.name} cases={self.cases} counterexamples={len(self.counterexamples)}"
        if self.counterexamples:
            text += f" first={self.counterexamples[0]}"
        return text


ORACLE_N_MAX = 12
ORACLE_D_MAX = 5
# the distinctive-edge bound is a fixed-d statement; sweep small d only
LEMMA1_D_MAX = 4


def _record(report: SweepReport, check: Check) -> None:
    report.cases += 1
    if not check:
        report.counterexamples.append(check.witness)


def oracle_homogeneity_sweep(n_max: int = ORACLE_N_MAX, d_max: int = ORACLE_D_MAX) -> SweepReport:
    report = SweepReport(f"oracle-homogeneity n<={n_max} d<={d_max}")
    for n in range(2, n_max + 1):
        for d in range(2, min(d_max, n) + 1):
            for k in range(0, n // 2 + 1):
                for i in range(0, k + 1):
                    for j in range(0, n - k + 1):
                        pp = PartitionPerturbation(n, d, k, i, j)
                        formula = count_distinctive_homogeneity(pp)
                        brute = brute_force_distinctive(n, d, pp.truth(), pp.candidate(), "h")
                        _record(report, Check(formula == brute, (n, d, k, i, j, formula, brute)))
    return report


def oracle_parity_sweep(n_max: int = ORACLE_N_MAX, d_max: int = ORACLE_D_MAX) -> SweepReport:
    report = SweepReport(f"oracle-parity n<={n_max} d<={d_max}")
    for n in range(2, n_max + 1):
        zero = LabelVector.zeros(n)
        for d in range(2, min(d_max, n) + 1):
            for k in range(0, n + 1):
                cand = LabelVector([1] * k + [0] * (n - k))
                formula = count_distinctive_parity(n, d, k)
                brute = brute_force_distinctive(n, d, zero, cand, "p")
                _record(report, Check(formula == brute, (n, d, k, formula, brute)))
    return report


def lemma1_sweep(n_max: int, d_max: int, delta: Fraction | float = Fraction(1, 10), n_min: int = 2) -> SweepReport:
    delta = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    report = SweepReport(f"lemma1 delta={float(delta)} n<={n_max} d<={d_max}")
    for n in range(n_min, n_max + 1):
        for d in range(2, min(d_max, n) + 1):
            for k in range(0, n // 2 + 1):
                for i in range(0, k + 1):
                    if not i < delta * n:
                        break
                    for j in range(0, n - k + 1):
                        if not j < delta * n:
                            break
                        _record(report, verify_lemma1(n, d, k, i, j, delta))
    return report


def nk_bound_sweep(n_max: int, d_max: int) -> SweepReport:
    report = SweepReport(f"nk-lower-bound n<={n_max} d<={d_max}")
    for n in range(4, n_max + 1):
        for d in range(2, min(d_max, n // 2) + 1):
            for k in range(1, n // 2 + 1):
                nk = count_distinctive_parity(n, d, k)
                bound = nk_lower_bound_exact(n, d, k)
                _record(report, Check(nk >= bound, (n, d, k, nk, float(bound))))
    return report


def lemma4_sweep(n_max: int, d_max: int) -> SweepReport:
    report = SweepReport(f"lemma4 n<={n_max} d<={d_max}")
    for n in range(4, n_max + 1):
        for d in range(2, min(d_max, n // 2) + 1):
            for k in range(1, n // 2 + 1):
                _record(report, verify_lemma4(n, d, k))
    return report


def lemma5_sweep(n_max: int, d_max: int) -> SweepReport:
    report = SweepReport(f"lemma5 n<={n_max} d<={d_max}")
    for n in range(4, n_max + 1):
        for d in range(2, min(d_max, n // 2) + 1):
            for k in range(1, n // 2 + 1):
                _record(report, verify_lemma5(n, d, k))
    return report


def vandermonde_sweep(n_max: int, d_max: int) -> SweepReport:
    report = SweepReport(f"vandermonde n<={n_max} d<={d_max}")
    for n in range(0, n_max + 1):
        for d in range(0, min(d_max, n) + 1):
            for k in range(0, n + 1):
                _record(report, vandermonde_check(n, d, k))
    return report


def run_count_checks(n_max: int = 40, d_max: int = 40, delta: float = 0.1) -> list[SweepReport]:
    """All oracle cross-checks and lemma sweeps, in a fixed order."""
    return [
        oracle_homogeneity_sweep(min(n_max, ORACLE_N_MAX), min(d_max, ORACLE_D_MAX)),
        oracle_parity_sweep(min(n_max, ORACLE_N_MAX), min(d_max, ORACLE_D_MAX)),
        lemma1_sweep(n_max, min(d_max, LEMMA1_D_MAX), delta),
        nk_bound_sweep(n_max, d_max),
        lemma4_sweep(n_max, d_max),
        lemma5_sweep(n_max, d_max),
        vandermonde_sweep(n_max, d_max),
    ]
