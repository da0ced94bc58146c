"""freeprob: exact-arithmetic non-crossing partition combinatorics and
free-probability transforms, verified against enumeration oracles."""

__version__ = "0.1.0"

from .errors import (
    FreeProbError,
    IrrationalRootError,
    ResourceLimitError,
    RouteMismatchError,
    ValidationError,
)
from .sequences import RationalSequence

__all__ = [
    "FreeProbError",
    "IrrationalRootError",
    "RationalSequence",
    "ResourceLimitError",
    "RouteMismatchError",
    "ValidationError",
]
