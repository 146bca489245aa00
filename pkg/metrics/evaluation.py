"""
Spike Forecaster - Predictive Metrics

Confusion counts over labelled timestamps and the derived report:
spike accuracy (precision), momentum share, spiking rates, TPR, FPR,
plus the penalised spike accuracy and spike-rate deviation. Ratios with
a zero denominator are reported as None, never as 0.
"""

import math
from dataclasses import dataclass, fields
from typing import Iterable, Optional

import numpy as np

from app.exceptions import NoRealSpikesError, ShapeMismatchError
from app.schemas import MetricsReport
from metrics.ground_truth import DirectionClass, GroundTruth

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class ConfusionCounts:
    n_labeled: int = 0
    n_real: int = 0
    n_predicted: int = 0
    n_true_positive: int = 0
    n_false_positive: int = 0
    n_predicted_momentum: int = 0

    @property
    def n_fake(self) -> int:
        return self.n_labeled - self.n_real

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(**{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)})

    @classmethod
    def from_arrays(cls, predictions: np.ndarray, truth: GroundTruth) -> "ConfusionCounts":
        predictions = np.asarray(predictions, dtype=bool)
        if predictions.shape != truth.labeled.shape:
            raise ShapeMismatchError(
                f"{predictions.shape[0]} predictions for {len(truth)} labelled bars",
                details={"predictions": int(predictions.shape[0]), "bars": len(truth)},
            )
        predicted = predictions & truth.labeled
        real = truth.is_real & truth.labeled
        return cls(
            n_labeled=truth.n_labeled,
            n_real=int(real.sum()),
            n_predicted=int(predicted.sum()),
            n_true_positive=int((predicted & real).sum()),
            n_false_positive=int((predicted & ~real).sum()),
            n_predicted_momentum=int((predicted & (truth.direction == DirectionClass.MOMENTUM)).sum()),
        )


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator else None


def psa(
    spike_accuracy: float,
    spiking_rate: float,
    real_spiking_rate: float,
    alpha: float = DEFAULT_ALPHA,
) -> tuple[float, float]:
    """
    Penalised spike accuracy.

    srd = spiking_rate / real_spiking_rate - 1 and
    psa = spike_accuracy * exp(-max(|srd| - alpha, 0)).

    Returns:
        (psa, srd)

    Raises:
        NoRealSpikesError: real_spiking_rate is zero.
    """
    if not real_spiking_rate > 0:
        raise NoRealSpikesError()
    srd = spiking_rate / real_spiking_rate - 1.0
    penalty = math.exp(-max(abs(srd) - alpha, 0.0))
    return spike_accuracy * penalty, srd


def report_from_counts(counts: ConfusionCounts, alpha: float = DEFAULT_ALPHA) -> MetricsReport:
    spike_accuracy = _ratio(counts.n_true_positive, counts.n_predicted)
    spiking_rate = _ratio(counts.n_predicted, counts.n_labeled)
    real_rate = _ratio(counts.n_real, counts.n_labeled)

    penalised: Optional[float] = None
    srd: Optional[float] = None
    if spiking_rate is not None and real_rate:
        srd = spiking_rate / real_rate - 1.0
        if spike_accuracy is not None:
            penalised, srd = psa(spike_accuracy, spiking_rate, real_rate, alpha)

    return MetricsReport(
        spike_accuracy=spike_accuracy,
        momentum_spike_pct=_ratio(counts.n_predicted_momentum, counts.n_predicted),
        spiking_rate=spiking_rate,
        real_spiking_rate=real_rate,
        tpr=_ratio(counts.n_true_positive, counts.n_real),
        fpr=_ratio(counts.n_false_positive, counts.n_fake),
        psa=penalised,
        srd=srd,
        n_labeled=counts.n_labeled,
        n_predicted=counts.n_predicted,
        n_real=counts.n_real,
    )


def evaluate(predictions: np.ndarray, truth: GroundTruth, alpha: float = DEFAULT_ALPHA) -> MetricsReport:
    """
    Score per-bar spike predictions against one day's ground truth.

    Raises:
        ShapeMismatchError: predictions and truth cover different bars.
    """
    return report_from_counts(ConfusionCounts.from_arrays(predictions, truth), alpha)


def evaluate_days(
    days: Iterable[tuple[np.ndarray, GroundTruth]],
    alpha: float = DEFAULT_ALPHA,
) -> MetricsReport:
    """Pool confusion counts over several days, then compute the rates."""
    total = ConfusionCounts()
    for predictions, truth in days:
        total = total + ConfusionCounts.from_arrays(predictions, truth)
    return report_from_counts(total, alpha)


def align_predictions(row_index: np.ndarray, predictions: np.ndarray, n_bars: int) -> np.ndarray:
    """
    Spread row-level predictions onto the bar grid; bars without a
    feature row are never predicted.
    """
    row_index = np.asarray(row_index, dtype=np.int64)
    predictions = np.asarray(predictions, dtype=bool)
    if row_index.shape != predictions.shape:
        raise ShapeMismatchError(
            f"{predictions.shape[0]} predictions for {row_index.shape[0]} rows",
        )
    if row_index.size and (row_index.min() < 0 or row_index.max() >= n_bars):
        raise ShapeMismatchError(f"row index outside [0, {n_bars})")
    out = np.zeros(n_bars, dtype=bool)
    out[row_index] = predictions
    return out
