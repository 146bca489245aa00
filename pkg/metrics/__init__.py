"""
Spike Forecaster - Spike Metrics
"""

from metrics.evaluation import (
    ConfusionCounts,
    align_predictions,
    evaluate,
    evaluate_days,
    psa,
    report_from_counts,
)
from metrics.ground_truth import (
    DirectionClass,
    GroundTruth,
    abs_returns,
    label_ground_truth,
    spike_threshold,
)

__all__ = [
    "ConfusionCounts",
    "DirectionClass",
    "GroundTruth",
    "abs_returns",
    "align_predictions",
    "evaluate",
    "evaluate_days",
    "label_ground_truth",
    "psa",
    "report_from_counts",
    "spike_threshold",
]
