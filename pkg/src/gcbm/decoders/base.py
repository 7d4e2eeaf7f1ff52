from __future__ import annotations

from dataclasses import dataclass

from ..model import LabelVector


@dataclass(frozen=True)
class DecodeResult:
    estimate: LabelVector
    objective: int
    iterations: int
    flips_last_sweep: int
    method: str
    tie_broken: bool = False


@dataclass(frozen=True)
class SpectralConfig:
    """Power-iteration settings for the spectral initializer."""

    power_iterations: int = 1000
    tolerance: float = 1e-9
    deflation: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.power_iterations < 1:
            raise ValueError("power_iterations must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
