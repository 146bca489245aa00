"""
Spike Forecaster - Ground-Truth Labelling

A timestamp is a real spike when the mean absolute move over the next
w bars exceeds the day's median absolute return. Its direction class is
momentum when the move over the next w bars continues the move over the
previous w bars, reversion when it reverses it.

Only timestamps t in [w, n - 1 - w] are labelled; the rest are excluded
from every denominator.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

import numpy as np

from app.exceptions import DataError, InsufficientHistoryError


class DirectionClass(IntEnum):
    REVERSION = -1
    NONE = 0
    MOMENTUM = 1


@dataclass
class GroundTruth:
    r_thresh: float
    window: int
    strength: np.ndarray
    is_real: np.ndarray
    direction: np.ndarray
    labeled: np.ndarray

    def __len__(self) -> int:
        return int(self.labeled.shape[0])

    @property
    def n_labeled(self) -> int:
        return int(self.labeled.sum())

    @property
    def n_real(self) -> int:
        return int((self.is_real & self.labeled).sum())

    @property
    def real_rate(self) -> Optional[float]:
        return self.n_real / self.n_labeled if self.n_labeled else None

    def take(self, rows: np.ndarray | slice) -> "GroundTruth":
        """Labels for a subset of bars, e.g. the bars behind feature rows."""
        return GroundTruth(
            r_thresh=self.r_thresh,
            window=self.window,
            strength=self.strength[rows],
            is_real=self.is_real[rows],
            direction=self.direction[rows],
            labeled=self.labeled[rows],
        )

    @classmethod
    def concat(cls, parts: list["GroundTruth"]) -> "GroundTruth":
        """Stack several days; r_thresh is kept per day only, so it becomes NaN."""
        return cls(
            r_thresh=parts[0].r_thresh if len(parts) == 1 else float("nan"),
            window=parts[0].window,
            strength=np.concatenate([p.strength for p in parts]),
            is_real=np.concatenate([p.is_real for p in parts]),
            direction=np.concatenate([p.direction for p in parts]),
            labeled=np.concatenate([p.labeled for p in parts]),
        )


def abs_returns(vwap: np.ndarray) -> np.ndarray:
    """
    Absolute percentage returns |X[t+1] / X[t] - 1|, length n - 1.

    Raises:
        InsufficientHistoryError: fewer than two prices.
        DataError: a non-positive price.
    """
    prices = np.asarray(vwap, dtype=np.float64)
    if prices.shape[0] < 2:
        raise InsufficientHistoryError("need at least two prices for returns")
    if np.any(prices <= 0):
        bad = int(np.flatnonzero(prices <= 0)[0])
        raise DataError(f"non-positive price at index {bad}", details={"index": bad})
    return np.abs(prices[1:] / prices[:-1] - 1.0)


def spike_threshold(returns: np.ndarray) -> float:
    """Median of one day's absolute returns."""
    returns = np.asarray(returns, dtype=np.float64)
    if returns.size == 0:
        raise DataError("cannot take the median of an empty return series")
    return float(np.median(returns))


def label_ground_truth(vwap: np.ndarray, window: int = 3, r_thresh: Optional[float] = None) -> GroundTruth:
    """
    Label one day's VWAP series.

    Args:
        vwap: Bar prices.
        window: Forward (strength) and backward (trend) window w.
        r_thresh: Spike threshold; the day's median absolute return if None.

    Raises:
        InsufficientHistoryError: series length not above 2w.
    """
    prices = np.asarray(vwap, dtype=np.float64)
    n = prices.shape[0]
    if window < 1:
        raise InsufficientHistoryError(f"window must be >= 1, got {window}")
    if n <= 2 * window:
        raise InsufficientHistoryError(
            f"series of {n} bars too short for window {window}",
            details={"bars": n, "window": window},
        )

    returns = abs_returns(prices)
    if r_thresh is None:
        r_thresh = spike_threshold(returns)

    t = np.arange(window, n - window)
    # returns[i] is the move i -> i+1, so window i covers moves i..i+w-1
    forward = np.lib.stride_tricks.sliding_window_view(returns, window).mean(axis=1)
    strength = np.zeros(n)
    strength[t] = forward[t]

    labeled = np.zeros(n, dtype=bool)
    labeled[t] = True
    is_real = labeled & (strength > r_thresh)

    trend = (prices[t] - prices[t - window]) * (prices[t + window] - prices[t])
    direction = np.zeros(n, dtype=np.int8)
    direction[t] = np.sign(trend).astype(np.int8)

    return GroundTruth(
        r_thresh=float(r_thresh),
        window=window,
        strength=strength,
        is_real=is_real,
        direction=direction,
        labeled=labeled,
    )
