"""Closed-form sample-complexity thresholds for exact recovery.

Every threshold is a value of the expected edge count ``p * C(n, d)``.
Logarithms in thresholds are natural; the binary entropy is in bits so
that ``1 - H(theta)`` is the BSC capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .combinatorics import log_binom
from .errors import DomainError

__all__ = [
    "ThresholdReport",
    "ScalingBounds",
    "divergence_half_theta",
    "snr_factor",
    "binary_entropy",
    "homogeneity_threshold",
    "parity_threshold",
    "parity_scaling_bounds",
    "conjectured_parity_limit",
    "ldgm_rate",
    "linear_normalizer",
]


@dataclass(frozen=True)
class ThresholdReport:
    sample_complexity_limit: float
    required_p: float | None  # None when the limit exceeds C(n, d)
    regime: str  # constant-d, scaling-d-upper, scaling-d-lower
    slack: float = 0.0
    warning: str | None = None


class ScalingBounds(NamedTuple):
    upper: tuple[ThresholdReport, ThresholdReport]
    lower: tuple[ThresholdReport, ThresholdReport]

    @property
    def achievable_above(self) -> float:
        return max(r.sample_complexity_limit for r in self.upper)

    @property
    def impossible_below(self) -> float:
        return max(r.sample_complexity_limit for r in self.lower)


def divergence_half_theta(theta: float) -> float:
    """KL divergence between Bern(1/2) and Bern(theta), in nats."""
    if not (0.0 < theta < 0.5):
        raise DomainError(f"need 0 < theta < 1/2, got {theta}")
    return 0.5 * math.log(0.5 / theta) + 0.5 * math.log(0.5 / (1.0 - theta))


def snr_factor(theta: float) -> float:
    """``(sqrt(1 - theta) - sqrt(theta))**2``, which equals ``1 - exp(-D(1/2 || theta))``."""
    if not (0.0 <= theta < 0.5):
        raise DomainError(f"need 0 <= theta < 1/2, got {theta}")
    return (math.sqrt(1.0 - theta) - math.sqrt(theta)) ** 2


def binary_entropy(theta: float) -> float:
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"need 0 <= theta <= 1, got {theta}")
    if theta in (0.0, 1.0):
        return 0.0
    return -theta * math.log2(theta) - (1.0 - theta) * math.log2(1.0 - theta)


def _report(limit: float, n: float, d: float, regime: str, slack: float, warning=None) -> ThresholdReport:
    if limit <= 0:
        raise DomainError("threshold must be positive")
    log_p = math.log(limit) - log_binom(n, d)
    required_p = math.exp(log_p) if log_p <= 0.0 else None
    return ThresholdReport(limit, required_p, regime, slack, warning)


def _check_nd(n: float, d: float) -> None:
    if not (2 <= d <= n):
        raise DomainError(f"need 2 <= d <= n, got n={n}, d={d}")
    if n <= 1:
        raise DomainError("need n > 1 so that log n > 0")


def homogeneity_threshold(n: float, d: float, theta: float, slack: float = 0.0) -> ThresholdReport:
    """``(2^(d-2) / d) * n log n / snr``, scaled by ``1 + slack``."""
    _check_nd(n, d)
    limit = (1.0 + slack) * 2.0 ** (d - 2) / d * n * math.log(n) / snr_factor(theta)
    warning = None
    if d > math.log(n):
        warning = "d exceeds log n; the homogeneity limit is only established for constant d"
    return _report(limit, n, d, "constant-d", slack, warning)


def parity_threshold(n: float, d: float, theta: float, slack: float = 0.0) -> ThresholdReport:
    """``(1 / d) * n log n / snr``, scaled by ``1 + slack``."""
    _check_nd(n, d)
    limit = (1.0 + slack) / d * n * math.log(n) / snr_factor(theta)
    return _report(limit, n, d, "constant-d", slack)


def parity_scaling_bounds(n: float, d: float, theta: float, slack: float = 0.0) -> ScalingBounds:
    """Achievability and converse boundaries when ``d`` may grow with ``n``.

    Recovery is guaranteed above both ``upper`` values and impossible below
    either ``lower`` value.
    """
    _check_nd(n, d)
    if d > n / 2:
        raise DomainError(f"need d <= n/2, got n={n}, d={d}")
    snr = snr_factor(theta)
    log_n = math.log(n)
    upper = (
        _report((1 + slack) * 2.5 / d * n * log_n / snr, n, d, "scaling-d-upper", slack),
        _report((1 + slack) * 5 * math.log(2) * n / snr, n, d, "scaling-d-upper", slack),
    )
    lower = (
        _report((1 - slack) / d * n * log_n / snr, n, d, "scaling-d-lower", slack),
        _report(n / (1.0 - binary_entropy(theta)), n, d, "scaling-d-lower", 0.0),
    )
    return ScalingBounds(upper, lower)


def conjectured_parity_limit(n: float, d: float, theta: float) -> float:
    """Conjectured exact limit for scaling d; not a proven threshold."""
    _check_nd(n, d)
    return max(n / (1.0 - binary_entropy(theta)), n * math.log(n) / (d * snr_factor(theta)))


def ldgm_rate(n: float, d: float, p: float) -> float:
    """Expected rate ``n / (p C(n, d))`` of the induced LDGM code."""
    if p <= 0:
        raise DomainError("p must be positive for a finite rate")
    return math.exp(math.log(n) - math.log(p) - log_binom(n, d))


def linear_normalizer(n: float, d: float) -> float:
    """``max(n, n log n / d)``, the axis scale used for noiseless parity sweeps."""
    return max(n, n * math.log(n) / d)
