"""Smooth numbers, harmonic sampling and Dickman approximations."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    DickmanTable,
    LpfSieve,
    PrimeTable,
    UsageError,
    RangeError,
)

__version__ = "0.1.0"
