"""
Spike Forecaster - Synthetic Tick Source

Geometric random walk with Bernoulli-injected momentum bursts and
log-normal volumes. Every day draws from its own seeded substream, so the
output is a pure function of the config.
"""

import numpy as np
import pandas as pd
import structlog

from app.exceptions import DataError
from app.schemas import SyntheticConfig
from app.seeding import SYNTH, make_rng
from sources.base import BaseTickSource, DayTicks

logger = structlog.get_logger(__name__)


# Longest burst, in ticks
MAX_BURST_TICKS = 50

MICROS_PER_SECOND = 1_000_000


def _burst_lengths(rng: np.random.Generator, count: int, persistence: float) -> np.ndarray:
    # Each further same-sign move happens with probability `persistence`
    if persistence >= 1.0:
        return np.full(count, MAX_BURST_TICKS, dtype=np.int64)
    return np.minimum(rng.geometric(1.0 - persistence, size=count), MAX_BURST_TICKS)


def _generate_day(
    config: SyntheticConfig,
    day_index: int,
    date: str,
    open_price: float,
) -> DayTicks:
    rng = make_rng(config.seed, SYNTH, day_index)
    n = config.ticks_per_day

    log_returns = rng.normal(0.0, config.noise_volatility, size=n)

    starts = np.flatnonzero(rng.random(n) < config.spike_rate)
    signs = rng.choice(np.array([-1.0, 1.0]), size=starts.size)
    lengths = _burst_lengths(rng, starts.size, config.momentum_persistence)
    move = config.noise_volatility * config.spike_multiplier
    for start, sign, length in zip(starts, signs, lengths):
        log_returns[start:start + length] = sign * move

    # First tick trades at the open
    log_returns[0] = 0.0
    prices = open_price * np.exp(np.cumsum(log_returns))

    mu = np.log(config.mean_volume) - 0.5 * config.volume_sigma ** 2
    volumes = np.maximum(1, np.rint(rng.lognormal(mu, config.volume_sigma, size=n))).astype(np.int64)

    session_us = config.session_seconds * MICROS_PER_SECOND
    timestamps = np.sort(rng.integers(0, session_us, size=n, dtype=np.int64))

    return DayTicks(
        date=date,
        timestamps=timestamps,
        prices=prices,
        volumes=volumes,
        metadata={"burst_starts": starts, "burst_lengths": lengths},
    )


def generate_synthetic_ticks(config: SyntheticConfig) -> list[DayTicks]:
    """
    Generate `config.n_days` business days of synthetic ticks.

    Each day opens at the previous day's close. Injected burst positions are
    attached as `metadata["burst_starts"]` for diagnostics.

    Raises:
        DataError: `ticks_per_day` is zero ("empty day").
    """
    if config.ticks_per_day == 0:
        raise DataError("empty day", details={"ticks_per_day": 0})

    dates = pd.bdate_range(start=config.start_date, periods=config.n_days)
    days: list[DayTicks] = []
    price = config.base_price
    for index, date in enumerate(dates):
        day = _generate_day(config, index, date.strftime("%Y-%m-%d"), price)
        price = float(day.prices[-1])
        days.append(day)
        logger.debug(
            "Generated synthetic day",
            date=day.date,
            ticks=len(day),
            bursts=int(day.metadata["burst_starts"].size),
        )

    return days


class SyntheticTickSource(BaseTickSource):
    """Tick source backed by the synthetic generator."""

    def __init__(self, config: SyntheticConfig):
        self.config = config

    @property
    def name(self) -> str:
        return "synthetic"

    def load_days(self) -> list[DayTicks]:
        days = generate_synthetic_ticks(self.config)
        logger.info("Generated synthetic days", source=self.name, days=len(days), seed=self.config.seed)
        return days
