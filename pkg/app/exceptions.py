"""
Spike Forecaster - Custom Exceptions

Application-specific exceptions. Every error carries the process exit code
the CLI reports for it.
"""

from typing import Any, Optional


class AppError(Exception):
    """Base application error."""

    def __init__(
        self,
        message: str,
        exit_code: int = 3,
        details: Optional[dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


# =============================================================================
# Usage errors (exit 1)
# =============================================================================

class UsageError(AppError):
    """1 - Invalid command line or configuration."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=1, details=details)


class ValidationError(UsageError):
    """Parameter values violate a documented invariant."""


class ShapeMismatchError(UsageError):
    """Array shapes do not match the network or each other."""


# =============================================================================
# Data errors (exit 2)
# =============================================================================

class DataError(AppError):
    """2 - Input data is missing, malformed or unusable."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class MalformedRowError(DataError):
    """A tick file row failed validation."""

    def __init__(
        self,
        message: str,
        line: int,
        details: Optional[dict[str, Any]] = None
    ):
        details = details or {}
        details["line"] = line
        self.line = line
        super().__init__(f"{message} (line {line})", details=details)


class NotFoundError(DataError):
    """A referenced file or artifact does not exist."""


class InsufficientHistoryError(DataError):
    """Series too short for the requested lags or windows."""


class UnnormalizedInputError(DataError):
    """Encoder input outside [0, 1]."""

    def __init__(self, message: str = "unnormalized input", details: Optional[dict[str, Any]] = None):
        super().__init__(message, details=details)


class NoRealSpikesError(DataError):
    """The evaluation window contains no real spikes."""

    def __init__(self, message: str = "no real spikes in window", details: Optional[dict[str, Any]] = None):
        super().__init__(message, details=details)


# =============================================================================
# Runtime failures (exit 3)
# =============================================================================

class RuntimeFailure(AppError):
    """3 - A run could not complete."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=3, details=details)


class UnsatisfiableSpaceError(RuntimeFailure):
    """A dependent parameter range is empty after clamping."""

    def __init__(
        self,
        parameter: str,
        low: float,
        high: float,
        details: Optional[dict[str, Any]] = None
    ):
        details = details or {}
        details.update({"parameter": parameter, "low": low, "high": high})
        super().__init__(f"Empty range for {parameter}: [{low}, {high}]", details=details)


class StudyFailedError(RuntimeFailure):
    """Every trial of a study failed."""
