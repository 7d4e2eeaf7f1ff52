"""Recovery algorithms for the censored block model on hypergraphs."""

from .base import DecodeResult, SpectralConfig
from .exhaustive import ML_MAX_NODES, decode_ml_exhaustive
from .gf2 import decode_parity_noiseless
from .refine import decode_algorithm1, flip_gains, refine, refinement_sweeps
from .spectral import cooccurrence_matrix, spectral_init

__all__ = [
    "DecodeResult",
    "SpectralConfig",
    "ML_MAX_NODES",
    "decode_ml_exhaustive",
    "decode_parity_noiseless",
    "decode_algorithm1",
    "refine",
    "refinement_sweeps",
    "flip_gains",
    "spectral_init",
    "cooccurrence_matrix",
]
