"""
Spike Forecaster - Preprocessing Pipeline

Ticks -> VWAP bars -> features -> normalized features -> spike trains.
"""

from preprocessing.encoding import SpikeTensor, encode_poisson
from preprocessing.features import (
    ChannelLabel,
    FeatureMatrix,
    make_difference_features,
    make_supervised_features,
)
from preprocessing.normalization import NormalizationSpec, apply_normalization, normalize
from preprocessing.vwap import VwapBar, VwapSeries, aggregate_vwap

__all__ = [
    "ChannelLabel",
    "FeatureMatrix",
    "NormalizationSpec",
    "SpikeTensor",
    "VwapBar",
    "VwapSeries",
    "aggregate_vwap",
    "apply_normalization",
    "encode_poisson",
    "make_difference_features",
    "make_supervised_features",
    "normalize",
]
