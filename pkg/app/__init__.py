"""
Spike Forecaster - App Package

Exports core application components.
"""

from app.config import Settings, get_settings
from app.exceptions import (
    AppError,
    DataError,
    InsufficientHistoryError,
    MalformedRowError,
    NoRealSpikesError,
    NotFoundError,
    RuntimeFailure,
    ShapeMismatchError,
    StudyFailedError,
    UnnormalizedInputError,
    UnsatisfiableSpaceError,
    UsageError,
    ValidationError,
)

__all__ = [
    # Config
    "Settings",
    "get_settings",
    # Exceptions
    "AppError",
    "UsageError",
    "ValidationError",
    "ShapeMismatchError",
    "DataError",
    "MalformedRowError",
    "NotFoundError",
    "InsufficientHistoryError",
    "UnnormalizedInputError",
    "NoRealSpikesError",
    "RuntimeFailure",
    "UnsatisfiableSpaceError",
    "StudyFailedError",
]
