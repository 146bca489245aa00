"""
Spike Forecaster - Base Tick Source Interface

Abstract base class that all tick sources implement, plus the in-memory
representation of one trading day of ticks.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from app.exceptions import ValidationError


@dataclass(frozen=True, slots=True)
class Tick:
    """One trade: microseconds since session open, price, traded volume."""
    timestamp: int
    price: float
    volume: int

    def __post_init__(self) -> None:
        if not self.price > 0:
            raise ValidationError(f"Tick price must be positive, got {self.price}")
        if self.volume <= 0:
            raise ValidationError(f"Tick volume must be positive, got {self.volume}")


@dataclass
class DayTicks:
    """
    Column-oriented ticks of a single trading day.

    Arrays share one length; timestamps are non-decreasing. `metadata`
    carries source specific extras such as synthetic burst positions.
    """
    date: str
    timestamps: np.ndarray
    prices: np.ndarray
    volumes: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.timestamps = np.asarray(self.timestamps, dtype=np.int64)
        self.prices = np.asarray(self.prices, dtype=np.float64)
        self.volumes = np.asarray(self.volumes, dtype=np.int64)
        n = len(self.timestamps)
        if len(self.prices) != n or len(self.volumes) != n:
            raise ValidationError(
                "Tick columns differ in length",
                details={"date": self.date},
            )

    def __len__(self) -> int:
        return len(self.timestamps)

    @classmethod
    def from_ticks(
        cls,
        date: str,
        ticks: Sequence[Tick],
        metadata: Optional[dict[str, Any]] = None,
    ) -> "DayTicks":
        return cls(
            date=date,
            timestamps=np.array([t.timestamp for t in ticks], dtype=np.int64),
            prices=np.array([t.price for t in ticks], dtype=np.float64),
            volumes=np.array([t.volume for t in ticks], dtype=np.int64),
            metadata=metadata or {},
        )

    def ticks(self) -> list[Tick]:
        """Materialize the day as Tick records."""
        return [
            Tick(timestamp=int(ts), price=float(p), volume=int(v))
            for ts, p, v in zip(self.timestamps, self.prices, self.volumes)
        ]


class BaseTickSource(ABC):
    """
    Abstract base class for tick sources.

    A source yields whole trading days in chronological order.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier used in logs."""
        ...

    @abstractmethod
    def load_days(self) -> list[DayTicks]:
        """
        Load every available trading day.

        Returns:
            Days sorted by date, each with non-decreasing timestamps.
        """
        ...
