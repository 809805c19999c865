"""A-stable implicit wave solver with O(N) exponential-kernel line sweeps."""

from .convolve import ConvResult, SweepLine, direct_convolve, fast_convolve, local_integrals, local_weights
from .kernels import BACKEND
from .params import FieldHistory, SchemeParams, make_params

__all__ = [
    "BACKEND",
    "ConvResult",
    "FieldHistory",
    "SchemeParams",
    "SweepLine",
    "direct_convolve",
    "fast_convolve",
    "local_integrals",
    "local_weights",
    "make_params",
]

__version__ = "0.1.0"
