"""
Spike Forecaster - Spike-Triggered Momentum Strategy

A spike prediction at bar t opens a position at the VWAP of bar t + 1
in the direction of the position flag

    F_t = P_t - mean(P_{t-1}, ..., P_{t-n})

(long when F_t > 0, short when F_t < 0, nothing when F_t = 0) and
closes it h bars later, or at the day's last bar. Only one position is
open at a time; the full capital is compounded at 1x leverage.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import structlog

from app.exceptions import ShapeMismatchError
from app.schemas import Direction, StrategyConfig
from storage.artifacts import write_csv

logger = structlog.get_logger(__name__)

TRADE_COLUMNS = ("entry_idx", "exit_idx", "direction", "entry_vwap", "exit_vwap", "return")
EQUITY_COLUMNS = ("timestamp_idx", "equity")


@dataclass(frozen=True)
class Trade:
    entry_idx: int
    exit_idx: int
    direction: Direction
    entry_vwap: float
    exit_vwap: float
    ret: float

    def to_row(self) -> dict:
        return {
            "entry_idx": self.entry_idx,
            "exit_idx": self.exit_idx,
            "direction": self.direction.value,
            "entry_vwap": self.entry_vwap,
            "exit_vwap": self.exit_vwap,
            "return": self.ret,
        }


@dataclass
class StrategyRun:
    trades: list[Trade] = field(default_factory=list)
    equity: np.ndarray = field(default_factory=lambda: np.ones(0))

    @property
    def returns(self) -> np.ndarray:
        return np.array([t.ret for t in self.trades], dtype=np.float64)

    @property
    def final_equity(self) -> float:
        return float(self.equity[-1]) if self.equity.size else 1.0


def position_flag(vwap: np.ndarray, t: int, lookback: int) -> Optional[float]:
    """F_t, or None while fewer than `lookback` earlier bars exist."""
    if t < lookback:
        return None
    prices = np.asarray(vwap, dtype=np.float64)
    return float(prices[t] - prices[t - lookback:t].mean())


def position_flags(vwap: np.ndarray, lookback: int) -> np.ndarray:
    """F_t for every bar; NaN where the look-back window is incomplete."""
    prices = np.asarray(vwap, dtype=np.float64)
    flags = np.full(prices.shape[0], np.nan)
    if prices.shape[0] > lookback:
        windows = np.lib.stride_tricks.sliding_window_view(prices[:-1], lookback)
        flags[lookback:] = prices[lookback:] - windows.mean(axis=1)
    return flags


def trade_direction(flag: float, invert: bool = False) -> Optional[Direction]:
    if flag > 0:
        direction = Direction.LONG
    elif flag < 0:
        direction = Direction.SHORT
    else:
        return None
    if invert:
        return Direction.SHORT if direction is Direction.LONG else Direction.LONG
    return direction


def equity_curve(n_bars: int, trades: list[Trade]) -> np.ndarray:
    """Capital after each bar, stepping at every trade's exit bar."""
    growth = np.ones(n_bars)
    for trade in trades:
        growth[trade.exit_idx] *= 1.0 + trade.ret
    return np.cumprod(growth)


def run_strategy(predictions: np.ndarray, vwap: np.ndarray, config: StrategyConfig) -> StrategyRun:
    """
    Trade one day.

    Args:
        predictions: Spike prediction per bar.
        vwap: Bar prices, aligned with predictions.
        config: Look-back, hold and direction settings.

    Raises:
        ShapeMismatchError: predictions and prices differ in length.
    """
    predictions = np.asarray(predictions, dtype=bool)
    prices = np.asarray(vwap, dtype=np.float64)
    if predictions.shape != prices.shape:
        raise ShapeMismatchError(
            f"{predictions.shape[0]} predictions for {prices.shape[0]} bars",
        )

    n = prices.shape[0]
    flags = position_flags(prices, config.lookback)
    cost = config.cost_bps * 1e-4
    trades: list[Trade] = []
    free_from = 0

    # entry needs a later exit bar, so signals stop at n - 3
    for t in np.flatnonzero(predictions):
        if t < free_from or t + 2 > n - 1:
            continue
        direction = trade_direction(flags[t], config.invert_direction) if not np.isnan(flags[t]) else None
        if direction is None:
            continue
        entry = int(t) + 1
        exit_ = min(entry + config.hold, n - 1)
        ret = direction.sign * (prices[exit_] / prices[entry] - 1.0) - cost
        trades.append(Trade(entry, exit_, direction, float(prices[entry]), float(prices[exit_]), float(ret)))
        free_from = exit_

    return StrategyRun(trades=trades, equity=equity_curve(n, trades))


def write_trades(trades: list[Trade], path: Union[str, Path]) -> Path:
    return write_csv([t.to_row() for t in trades], path, columns=TRADE_COLUMNS)


def write_equity(equity: np.ndarray, path: Union[str, Path]) -> Path:
    rows = [{"timestamp_idx": i, "equity": float(v)} for i, v in enumerate(equity)]
    return write_csv(rows, path, columns=EQUITY_COLUMNS)
