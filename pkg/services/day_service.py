"""
Spike Forecaster - Day Preparation

Turns one day of ticks into everything the models, metrics and strategy
need: VWAP bars, ground-truth labels, normalized features and the encoded
spike tensor. Days are independent and can be prepared in parallel.
"""

from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np
import structlog

from app.schemas import LabelConfig, ModelVariant, PreprocessConfig
from app.seeding import ENCODE, derive_seed
from metrics.ground_truth import GroundTruth, label_ground_truth
from preprocessing.encoding import SpikeTensor, encode_poisson
from preprocessing.features import FeatureMatrix, make_difference_features, make_supervised_features
from preprocessing.normalization import NormalizationSpec, apply_normalization, normalize
from preprocessing.vwap import VwapSeries, aggregate_vwap
from sources.base import DayTicks
from workers.pool import run_bounded

logger = structlog.get_logger(__name__)


@dataclass
class PreparedDay:
    index: int
    date: str
    bars: VwapSeries
    truth: GroundTruth
    features: FeatureMatrix
    spikes: SpikeTensor
    normalization: NormalizationSpec

    @property
    def n_bars(self) -> int:
        return len(self.bars.vwap)

    @property
    def row_truth(self) -> GroundTruth:
        """Ground truth of the bars behind each feature row."""
        return self.truth.take(self.features.row_index)


def raw_features(bars: VwapSeries, variant: ModelVariant, preprocess: PreprocessConfig, n_input: int) -> FeatureMatrix:
    """Lagged differences for Models 1/2, returns/volatility/volume for Model 3."""
    if variant is ModelVariant.MODEL3:
        return make_supervised_features(bars, lag_set=preprocess.lag_set, vol_window=preprocess.vol_window)
    return make_difference_features(bars, lags=n_input)


def prepare_day(
    day: DayTicks,
    index: int,
    variant: ModelVariant,
    n_input: int,
    preprocess: PreprocessConfig,
    labels: LabelConfig,
    seed: int,
    normalization: Optional[NormalizationSpec] = None,
) -> PreparedDay:
    """
    Prepare one day.

    Args:
        day: The day's ticks.
        index: Position of the day in the run; selects the encoding stream.
        n_input: Lag count for Models 1/2.
        normalization: Replay this spec instead of fitting on the day.
    """
    bars = aggregate_vwap(day, window_n=preprocess.window_n)
    truth = label_ground_truth(bars.vwap, window=labels.window)
    features = raw_features(bars, variant, preprocess, n_input)
    if normalization is None:
        features, normalization = normalize(
            features,
            q_low=preprocess.q_low,
            q_high=preprocess.q_high,
            upper_bound=preprocess.upper_bound,
        )
    else:
        features = apply_normalization(features, normalization)
    spikes = encode_poisson(features, timesteps=preprocess.timesteps, seed=derive_seed(seed, ENCODE, index))

    logger.debug(
        "Prepared day",
        date=day.date,
        bars=len(bars.vwap),
        rows=features.n_timestamps,
        real_spikes=truth.n_real,
    )
    return PreparedDay(
        index=index,
        date=day.date,
        bars=bars,
        truth=truth,
        features=features,
        spikes=spikes,
        normalization=normalization,
    )


def _prepare_item(item: tuple[int, DayTicks], **kwargs) -> PreparedDay:
    index, day = item
    return prepare_day(day, index, **kwargs)


def prepare_days(
    days: list[DayTicks],
    variant: ModelVariant,
    n_input: int,
    preprocess: PreprocessConfig,
    labels: LabelConfig,
    seed: int,
    jobs: int = 1,
) -> list[PreparedDay]:
    """Prepare every day, each normalized on its own values."""
    work = partial(
        _prepare_item,
        variant=variant,
        n_input=n_input,
        preprocess=preprocess,
        labels=labels,
        seed=seed,
    )
    return run_bounded(work, list(enumerate(days)), jobs)


def stack_days(days: list[PreparedDay]) -> tuple[SpikeTensor, GroundTruth]:
    """Concatenate days into one row stream with row-aligned labels."""
    spikes = np.concatenate([d.spikes.spikes for d in days], axis=0)
    truth = GroundTruth.concat([d.row_truth for d in days])
    return SpikeTensor(spikes=spikes), truth
