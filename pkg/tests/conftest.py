"""
Spike Forecaster - Test Configuration

Pytest fixtures and configuration.
"""

from pathlib import Path

import numpy as np
import pytest

from app.schemas import SyntheticConfig, UnsupervisedHyperparams
from sources.base import DayTicks


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for property loops."""
    return np.random.default_rng(12345)


@pytest.fixture
def small_synthetic_config() -> SyntheticConfig:
    """A few short synthetic days with frequent bursts."""
    return SyntheticConfig(
        n_days=3,
        ticks_per_day=4_000,
        noise_volatility=1e-4,
        spike_rate=0.01,
        momentum_persistence=0.8,
        seed=7,
    )


@pytest.fixture
def small_days(small_synthetic_config) -> list[DayTicks]:
    from sources.synthetic import generate_synthetic_ticks
    return generate_synthetic_ticks(small_synthetic_config)


@pytest.fixture
def model1_params() -> UnsupervisedHyperparams:
    return UnsupervisedHyperparams(n_hidden=8, d_thresh=4)


@pytest.fixture
def tick_csv(tmp_path: Path):
    """Write a tick CSV from raw text and return its path."""
    def _write(text: str, name: str = "ticks.csv") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
