"""Result type for algebraic error handling.

Result[E, A] = Success[A] | Failure[E]

Services return a Result whenever a computation has an expected failure mode,
so callers chain steps with ``flat_map`` instead of catching exceptions:

    >>> design_transfer(rotor, (1, 2), 0.005, Waveform.COSINE).map(lambda d: d.l1_norm)

Both variants satisfy the functor and monad laws (checked by property tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, TypeVar, Union, cast

E = TypeVar("E")
A = TypeVar("A")
B = TypeVar("B")


@dataclass(frozen=True)
class Success(Generic[A]):
    """Successful computation with a value."""

    value: A

    def map(self, f: Callable[[A], B]) -> Result[E, B]:
        """Transform the success value.

        Args:
            f: Function to apply to the success value

        Returns:
            Success with transformed value
        """
        return Success(f(self.value))  # type: ignore[arg-type]

    def flat_map(self, f: Callable[[A], Result[E, B]]) -> Result[E, B]:
        """Chain a computation that may fail.

        Args:
            f: Function that returns a Result

        Returns:
            Result from applying f to the success value
        """
        return f(self.value)

    def map_error(self, f: Callable[[E], E]) -> Result[E, A]:
        """Map over the error (no-op for Success)."""
        return cast("Result[E, A]", self)

    def unwrap_or(self, default: A) -> A:
        """Return the value."""
        return self.value

    def is_success(self) -> bool:
        """Check if this is a Success."""
        return True

    def is_failure(self) -> bool:
        """Check if this is a Failure."""
        return False


@dataclass(frozen=True)
class Failure(Generic[E]):
    """Failed computation with an error.

    Failure short-circuits map and flat_map.
    """

    error: E

    def map(self, f: Callable[[A], B]) -> Result[E, B]:
        """Propagate the failure unchanged."""
        return cast("Result[E, B]", self)

    def flat_map(self, f: Callable[[A], Result[E, B]]) -> Result[E, B]:
        """Propagate the failure unchanged."""
        return cast("Result[E, B]", self)

    def map_error(self, f: Callable[[E], E]) -> Result[E, A]:
        """Transform the error.

        Args:
            f: Function to transform error

        Returns:
            Failure with transformed error
        """
        return cast("Result[E, A]", Failure(f(self.error)))

    def unwrap_or(self, default: A) -> A:
        """Return the supplied default."""
        return default

    def is_success(self) -> bool:
        """Check if this is a Success."""
        return False

    def is_failure(self) -> bool:
        """Check if this is a Failure."""
        return True


Result = Union[Success[A], Failure[E]]


def success(value: A) -> Result[E, A]:
    """Create a Success result."""
    return Success(value)  # type: ignore[arg-type]


def failure(error: E) -> Result[E, A]:
    """Create a Failure result."""
    return Failure(error)  # type: ignore[arg-type]
