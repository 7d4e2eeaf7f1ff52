"""Exception hierarchy shared across the package."""


class GCBMError(Exception):
    """Base class for every error raised by :mod:`gcbm`."""


class DomainError(GCBMError, ValueError):
    """An argument lies outside the range an operation is defined on."""


class BudgetExceededError(GCBMError):
    """An exhaustive enumeration would exceed its configured size cap."""


class ConfigurationError(GCBMError, ValueError):
    """A sweep or decoder was configured with incompatible options."""


class DecodeFailure(GCBMError):
    """A decoder could not produce an estimate from the given measurements.

    Monte Carlo drivers count these as failed trials.
    """


class DegenerateInputError(DecodeFailure):
    """The input carries no usable information (e.g. zero sampled edges)."""


class InconsistentSystemError(DecodeFailure):
    """A GF(2) system has no solution."""


class RankDeficitError(DecodeFailure):
    """A GF(2) system has more solutions than the flip symmetry explains."""

    def __init__(self, kernel_dim: int):
        super().__init__(f"under-determined system, kernel dimension {kernel_dim}")
        self.kernel_dim = kernel_dim
