"""Effect types shared by the services and storage layers.

- Result[E, A]: Success | Failure, used for outcomes that are expected to fail
  in normal use (a truncation search hitting its cap, a transfer on an
  uncoupled pair).
- IO[A]: suspended side effects, used for every artifact read and write.
- ErrorDetails: the structured error carried by Failure.
"""

from .error_details import ErrorDetails
from .io import IO, Effect, FlatMapped, Pure, effect, pure
from .result import Failure, Result, Success, failure, success

__all__ = [
    "IO",
    "Pure",
    "Effect",
    "FlatMapped",
    "effect",
    "pure",
    "Result",
    "Success",
    "Failure",
    "success",
    "failure",
    "ErrorDetails",
]
