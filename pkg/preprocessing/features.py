"""
Spike Forecaster - Feature Construction

Lagged difference features for the unsupervised models and
returns/volatility/volume features for the supervised model. Signed
quantities are split into a positive and a negative channel.
"""

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from app.exceptions import InsufficientHistoryError, ValidationError
from preprocessing.vwap import VwapSeries

ChannelSign = Literal["pos", "neg", "abs"]


@dataclass(frozen=True, slots=True)
class ChannelLabel:
    """Descriptor of one feature channel."""
    feature: str
    lag: int
    sign: ChannelSign


@dataclass
class FeatureMatrix:
    """
    N x K feature values.

    `row_index[i]` is the VWAP bar that row i describes, so predictions can
    be mapped back onto the bar grid.
    """
    values: np.ndarray
    labels: list[ChannelLabel]
    row_index: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        self.row_index = np.asarray(self.row_index, dtype=np.int64)
        if self.values.ndim != 2:
            raise ValidationError(f"Feature values must be 2-D, got shape {self.values.shape}")
        if self.values.shape[1] != len(self.labels):
            raise ValidationError("Channel label count does not match feature width")
        if len(self.row_index) != self.values.shape[0]:
            raise ValidationError("row_index length does not match feature rows")

    @property
    def n_timestamps(self) -> int:
        return self.values.shape[0]

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]

    def take(self, rows: np.ndarray | slice) -> "FeatureMatrix":
        """Row subset sharing the channel layout."""
        return FeatureMatrix(values=self.values[rows], labels=list(self.labels), row_index=self.row_index[rows])

    @classmethod
    def concat(cls, parts: list["FeatureMatrix"]) -> "FeatureMatrix":
        if not parts:
            raise ValidationError("Nothing to concatenate")
        return cls(
            values=np.concatenate([p.values for p in parts], axis=0),
            labels=list(parts[0].labels),
            row_index=np.concatenate([p.row_index for p in parts]),
        )


def split_signed(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split signed values into (max(x, 0), max(-x, 0))."""
    return np.maximum(values, 0.0), np.maximum(-values, 0.0)


def make_difference_features(bars: VwapSeries, lags: int) -> FeatureMatrix:
    """
    Lagged VWAP differences d_i(n) = P_n - P_{n-i}, i = 1..k.

    Channels are ordered [pos lag 1..k, neg lag 1..k], so the first k
    channels feed the positive pathway and the last k the negative one.
    The first k bars are dropped.

    Raises:
        InsufficientHistoryError: k >= number of bars.
    """
    if lags < 1:
        raise ValidationError(f"lags must be >= 1, got {lags}")
    prices = np.asarray(bars.vwap, dtype=np.float64)
    n = len(prices)
    if lags >= n:
        raise InsufficientHistoryError(
            "insufficient history",
            details={"lags": lags, "bars": n},
        )

    rows = np.arange(lags, n)
    diffs = np.stack([prices[rows] - prices[rows - i] for i in range(1, lags + 1)], axis=1)
    pos, neg = split_signed(diffs)

    labels = [ChannelLabel("diff", i, "pos") for i in range(1, lags + 1)]
    labels += [ChannelLabel("diff", i, "neg") for i in range(1, lags + 1)]
    return FeatureMatrix(values=np.hstack([pos, neg]), labels=labels, row_index=rows)


def rolling_volatility(returns: np.ndarray, window: int) -> np.ndarray:
    """Sample standard deviation over trailing windows; zeros for window 1."""
    if window == 1:
        return np.zeros(len(returns))
    return sliding_window_view(returns, window).std(axis=1, ddof=1)


def make_supervised_features(
    bars: VwapSeries,
    lag_set: Iterable[int] = (1, 3, 5),
    vol_window: int = 10,
) -> FeatureMatrix:
    """
    Returns, volatility and volume features for the supervised model.

    Per lag i: simple return P_n / P_{n-i} - 1 split into pos/neg channels.
    Volatility is the rolling sample std of 1-step returns over `vol_window`
    bars ending at n; volume is the rolling total volume over the same
    window. Rows start once every channel is defined.
    """
    lags = sorted(set(int(i) for i in lag_set))
    if not lags or lags[0] < 1:
        raise ValidationError("lag_set must contain positive lags")
    if vol_window < 1:
        raise ValidationError(f"vol_window must be >= 1, got {vol_window}")

    prices = np.asarray(bars.vwap, dtype=np.float64)
    volume = np.asarray(bars.total_volume, dtype=np.float64)
    n = len(prices)
    start = max(lags[-1], vol_window)
    if start >= n:
        raise InsufficientHistoryError(
            "insufficient history",
            details={"max_lag": lags[-1], "vol_window": vol_window, "bars": n},
        )

    rows = np.arange(start, n)
    returns = np.stack([prices[rows] / prices[rows - i] - 1.0 for i in lags], axis=1)
    pos, neg = split_signed(returns)

    # step[m] is the 1-step return ending at bar m + 1
    step = prices[1:] / prices[:-1] - 1.0
    vol_all = rolling_volatility(step, vol_window)
    # vol_all[j] covers step[j .. j + w - 1], i.e. bars j + 1 .. j + w
    volatility = vol_all[rows - vol_window]

    volume_all = sliding_window_view(volume, vol_window).sum(axis=1)
    volume_sum = volume_all[rows - vol_window + 1]

    labels = [ChannelLabel("return", i, "pos") for i in lags]
    labels += [ChannelLabel("return", i, "neg") for i in lags]
    labels += [ChannelLabel("volatility", vol_window, "abs"), ChannelLabel("volume", vol_window, "abs")]
    values = np.hstack([pos, neg, volatility[:, None], volume_sum[:, None]])
    return FeatureMatrix(values=values, labels=labels, row_index=rows)
