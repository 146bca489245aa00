"""
Spike Forecaster - Normalization

Robust per-channel scaling: clip each channel to its [q_low, q_high]
quantile range and min-max rescale the clipped range to [0, upper_bound].
The fitted cut values are kept in a NormalizationSpec so test days are
transformed exactly like the training day.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.exceptions import DataError, ShapeMismatchError
from preprocessing.features import FeatureMatrix


class NormalizationSpec(BaseModel):
    """Fitted per-channel cut values."""
    model_config = ConfigDict(extra="forbid")

    q_low_level: float = Field(ge=0, le=1)
    q_high_level: float = Field(ge=0, le=1)
    lower: list[float]
    upper: list[float]
    upper_bound: float = Field(gt=0, le=1)

    @model_validator(mode="after")
    def check_cuts(self) -> "NormalizationSpec":
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper cut lists differ in length")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("q_low cut exceeds q_high cut")
        return self

    @property
    def n_channels(self) -> int:
        return len(self.lower)


def _transform(values: np.ndarray, lower: np.ndarray, upper: np.ndarray, upper_bound: float) -> np.ndarray:
    span = upper - lower
    clipped = np.clip(values, lower, upper)
    safe = np.where(span > 0, span, 1.0)
    scaled = (clipped - lower) / safe * upper_bound
    # Constant channels carry no information
    scaled = np.where(span > 0, scaled, 0.0)
    return np.clip(scaled, 0.0, upper_bound)


def normalize(
    features: FeatureMatrix,
    q_low: float = 0.1,
    q_high: float = 0.9,
    upper_bound: float = 1.0,
) -> tuple[FeatureMatrix, NormalizationSpec]:
    """
    Fit and apply robust scaling.

    Quantiles use numpy's linear interpolation over every value of the
    channel, zeros included.

    Raises:
        DataError: empty feature matrix.
    """
    if features.n_timestamps == 0:
        raise DataError("Cannot normalize an empty feature matrix")

    lower = np.quantile(features.values, q_low, axis=0)
    upper = np.quantile(features.values, q_high, axis=0)
    spec = NormalizationSpec(
        q_low_level=q_low,
        q_high_level=q_high,
        lower=lower.tolist(),
        upper=upper.tolist(),
        upper_bound=upper_bound,
    )
    return apply_normalization(features, spec), spec


def apply_normalization(features: FeatureMatrix, spec: NormalizationSpec) -> FeatureMatrix:
    """Replay a fitted spec on new features."""
    if features.n_channels != spec.n_channels:
        raise ShapeMismatchError(
            f"Spec has {spec.n_channels} channels, features have {features.n_channels}",
        )
    values = _transform(
        features.values,
        np.asarray(spec.lower, dtype=np.float64),
        np.asarray(spec.upper, dtype=np.float64),
        spec.upper_bound,
    )
    return FeatureMatrix(values=values, labels=list(features.labels), row_index=features.row_index.copy())
