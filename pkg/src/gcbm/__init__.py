"""Exact community recovery in the generalized censored block model.

Sampling, exact counting, recovery thresholds, decoders and a Monte Carlo
harness for d-uniform hypergraphs whose edges report either homogeneity or
parity of their nodes' binary labels through a binary symmetric channel.
"""

from .errors import (
    BudgetExceededError,
    ConfigurationError,
    DecodeFailure,
    DegenerateInputError,
    DomainError,
    GCBMError,
    InconsistentSystemError,
    RankDeficitError,
)
from .model import (
    Hyperedge,
    LabelVector,
    MeasurementKind,
    MeasurementSet,
    ModelParams,
    hamming_objective,
    measure,
    read_measurements,
    recovery_success,
    sample_measurements,
    write_measurements,
)

__version__ = "0.1.0"
