"""Exception hierarchy for the fruit census pipeline."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from pathlib import Path


class FruitCensusError(Exception):
    """Base exception for pipeline failures.

    Attributes:
        message: Human-readable error message.
        original_exception: The underlying exception that caused the failure.
    """

    def __init__(
        self,
        message: str,
        original_exception: Exception | None = None,
    ) -> None:
        """Initialize FruitCensusError.

        Args:
            message: Human-readable error message.
            original_exception: The underlying exception (optional).
        """
        super().__init__(message)
        self.message = message
        self.original_exception = original_exception

    def __str__(self) -> str:
        """String representation of the error."""
        if self.original_exception:
            return f"{self.message} (caused by: {self.original_exception!r})"
        return self.message


class ConfigError(FruitCensusError):
    """Run configuration or command-line arguments are invalid."""


class DatasetError(FruitCensusError):
    """A dataset file is missing, malformed, or violates an invariant.

    Attributes:
        path: File the problem was found in.
        line: 1-based line number for line-delimited files, if known.
    """

    def __init__(
        self,
        message: str,
        path: Path | str,
        line: int | None = None,
        original_exception: Exception | None = None,
    ) -> None:
        """Initialize DatasetError.

        Args:
            message: Description of the problem.
            path: File or directory the problem relates to.
            line: 1-based line number (optional).
            original_exception: The underlying exception (optional).
        """
        self.path = str(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{location}: {message}", original_exception)


class ContractViolationError(FruitCensusError):
    """An operation was called with inputs that break its preconditions."""


class DepthRangeError(FruitCensusError):
    """Depth value lies outside the camera's accepted range."""


class SingularSystemError(FruitCensusError):
    """A linear system has no unique solution."""


class SimulationError(FruitCensusError):
    """The simulator could not satisfy the requested scene constraints."""


class PipelineError(FruitCensusError):
    """A pipeline stage failed in a way that prevents completion."""
