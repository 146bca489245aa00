"""
Spike Forecaster - VWAP Aggregation

Groups consecutive ticks into fixed-count windows and takes the
volume-weighted average price of each window.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from app.exceptions import DataError, ValidationError
from sources.base import DayTicks, Tick


@dataclass(frozen=True, slots=True)
class VwapBar:
    """One aggregated window."""
    index: int
    vwap: float
    total_volume: int


@dataclass
class VwapSeries:
    """Columnar VWAP bars of one day."""
    vwap: np.ndarray
    total_volume: np.ndarray
    date: str = ""

    def __len__(self) -> int:
        return len(self.vwap)

    def bars(self) -> list[VwapBar]:
        return [
            VwapBar(index=i, vwap=float(p), total_volume=int(v))
            for i, (p, v) in enumerate(zip(self.vwap, self.total_volume))
        ]

    @classmethod
    def from_prices(cls, prices: Sequence[float], volumes: Sequence[int] | None = None, date: str = "") -> "VwapSeries":
        """Wrap a ready-made price path (unit volumes unless given)."""
        vwap = np.asarray(prices, dtype=np.float64)
        if volumes is None:
            total = np.ones(len(vwap), dtype=np.int64)
        else:
            total = np.asarray(volumes, dtype=np.int64)
        return cls(vwap=vwap, total_volume=total, date=date)


def aggregate_vwap(ticks: Union[DayTicks, Sequence[Tick]], window_n: int = 10) -> VwapSeries:
    """
    Aggregate ticks into VWAP bars.

    Bar j covers ticks [j*n, (j+1)*n); a trailing partial window still
    produces a bar. Each VWAP is clipped to its window's price range so the
    weighted-mean bound holds exactly under rounding.

    Raises:
        DataError: no ticks ("no ticks").
        ValidationError: window_n < 1.
    """
    if window_n < 1:
        raise ValidationError(f"window_n must be >= 1, got {window_n}")

    if isinstance(ticks, DayTicks):
        day = ticks
    else:
        day = DayTicks.from_ticks("", list(ticks))

    if len(day) == 0:
        raise DataError("no ticks", details={"date": day.date})

    starts = np.arange(0, len(day), window_n)
    volumes = day.volumes.astype(np.float64)
    pv = np.add.reduceat(day.prices * volumes, starts)
    total = np.add.reduceat(day.volumes, starts)
    vwap = pv / total.astype(np.float64)

    low = np.minimum.reduceat(day.prices, starts)
    high = np.maximum.reduceat(day.prices, starts)
    vwap = np.clip(vwap, low, high)

    return VwapSeries(vwap=vwap, total_volume=total.astype(np.int64), date=day.date)
