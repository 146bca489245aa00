"""
Spike Forecaster - Preprocessing Tests

VWAP, features, normalization, encoding and the binary container.
"""

import numpy as np
import pytest

from app.exceptions import DataError, InsufficientHistoryError, UnnormalizedInputError
from preprocessing import (
    FeatureMatrix,
    VwapSeries,
    aggregate_vwap,
    apply_normalization,
    encode_poisson,
    make_difference_features,
    make_supervised_features,
    normalize,
)
from preprocessing.container import read_features, read_spikes, write_features, write_spikes
from preprocessing.encoding import SpikeTensor
from preprocessing.features import ChannelLabel
from sources.base import DayTicks, Tick


def _matrix(values) -> FeatureMatrix:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    labels = [ChannelLabel("x", i, "abs") for i in range(values.shape[1])]
    return FeatureMatrix(values=values, labels=labels, row_index=np.arange(values.shape[0]))


# =============================================================================
# VWAP
# =============================================================================

def test_vwap_two_ticks():
    bars = aggregate_vwap([Tick(0, 10.0, 1), Tick(1, 20.0, 3)], window_n=2)
    assert len(bars) == 1
    assert bars.vwap[0] == 17.5
    assert bars.total_volume[0] == 4


def test_vwap_constant_price(rng):
    n = 57
    day = DayTicks(
        date="d",
        timestamps=np.arange(n),
        prices=np.full(n, 101.37),
        volumes=rng.integers(1, 1000, size=n),
    )
    bars = aggregate_vwap(day, window_n=10)
    assert np.all(bars.vwap == 101.37)


def test_vwap_partial_window_matches_direct_sum(rng):
    prices = rng.uniform(100, 101, size=25)
    volumes = rng.integers(1, 500, size=25)
    day = DayTicks(date="d", timestamps=np.arange(25), prices=prices, volumes=volumes)
    bars = aggregate_vwap(day, window_n=10)

    assert len(bars) == 3
    for j, (lo, hi) in enumerate([(0, 10), (10, 20), (20, 25)]):
        expected = sum(prices[i] * volumes[i] for i in range(lo, hi)) / sum(volumes[lo:hi])
        assert bars.vwap[j] == pytest.approx(expected, rel=1e-12)
        assert bars.total_volume[j] == volumes[lo:hi].sum()
        assert prices[lo:hi].min() <= bars.vwap[j] <= prices[lo:hi].max()


def test_vwap_no_ticks():
    with pytest.raises(DataError, match="no ticks"):
        aggregate_vwap([], window_n=10)


# =============================================================================
# Features
# =============================================================================

def test_difference_features_first_differences():
    features = make_difference_features(VwapSeries.from_prices([1, 3, 2]), lags=1)
    np.testing.assert_array_equal(features.values, [[2, 0], [0, 1]])
    np.testing.assert_array_equal(features.row_index, [1, 2])
    assert features.labels[0] == ChannelLabel("diff", 1, "pos")
    assert features.labels[1] == ChannelLabel("diff", 1, "neg")


def test_difference_features_constant_series():
    features = make_difference_features(VwapSeries.from_prices([5.0] * 20), lags=4)
    assert features.n_channels == 8
    assert not features.values.any()


def test_difference_features_reconstruct_lags(rng):
    prices = 100 + np.cumsum(rng.normal(size=100))
    k = 3
    features = make_difference_features(VwapSeries.from_prices(prices), lags=k)
    for i in range(1, k + 1):
        signed = features.values[:, i - 1] - features.values[:, k + i - 1]
        n = features.row_index
        np.testing.assert_array_equal(signed, prices[n] - prices[n - i])
        assert not np.any((features.values[:, i - 1] > 0) & (features.values[:, k + i - 1] > 0))


def test_difference_features_insufficient_history():
    with pytest.raises(InsufficientHistoryError, match="insufficient history"):
        make_difference_features(VwapSeries.from_prices([1.0, 2.0]), lags=2)


def test_supervised_features_two_bars():
    features = make_supervised_features(VwapSeries.from_prices([100.0, 101.0]), lag_set={1}, vol_window=1)
    assert features.n_timestamps == 1
    assert features.values[0, 0] == pytest.approx(0.01)
    assert features.values[0, 1] == 0.0


def test_supervised_features_constant_prices():
    features = make_supervised_features(VwapSeries.from_prices([50.0] * 40))
    # pos/neg returns for lags 1, 3, 5 then volatility
    assert not features.values[:, :7].any()
    assert features.n_channels == 8


def test_supervised_volatility_two_pass(rng):
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 1e-3, size=200)))
    volumes = rng.integers(1, 100, size=200)
    w = 10
    features = make_supervised_features(VwapSeries.from_prices(prices, volumes), lag_set={1, 3, 5}, vol_window=w)
    vol_col = [i for i, lab in enumerate(features.labels) if lab.feature == "volatility"][0]
    volume_col = [i for i, lab in enumerate(features.labels) if lab.feature == "volume"][0]

    for row, n in enumerate(features.row_index):
        window = [prices[m] / prices[m - 1] - 1 for m in range(n - w + 1, n + 1)]
        mean = sum(window) / w
        std = (sum((r - mean) ** 2 for r in window) / (w - 1)) ** 0.5
        assert features.values[row, vol_col] == pytest.approx(std, abs=1e-12)
        assert features.values[row, volume_col] == volumes[n - w + 1:n + 1].sum()


# =============================================================================
# Normalization
# =============================================================================

def test_normalize_clips_outlier():
    values = np.zeros(100)
    values[-1] = 1e9
    normed, spec = normalize(_matrix(values))
    assert normed.values.max() <= 1.0
    assert spec.upper[0] == 0.0
    # constant after clipping
    assert not normed.values.any()


def test_normalize_endpoints():
    normed, _ = normalize(_matrix(np.arange(101)), upper_bound=1.0)
    assert normed.values.min() == 0.0
    assert normed.values.max() == 1.0


def test_normalize_upper_bound(rng):
    normed, spec = normalize(_matrix(rng.exponential(size=(500, 3))), upper_bound=0.6)
    assert normed.values.max() == 0.6
    assert normed.values.min() >= 0.0
    assert spec.upper_bound == 0.6


def test_normalize_reduces_boundary_mass(rng):
    heavy = rng.standard_t(df=2, size=5000) ** 2
    robust, _ = normalize(_matrix(heavy))
    plain = (heavy - heavy.min()) / (heavy.max() - heavy.min())

    def boundary_mass(x):
        return np.mean((x < 0.05) | (x > 0.95))

    # plain min-max piles almost everything near zero
    assert boundary_mass(robust.values[:, 0]) < boundary_mass(plain)


def test_replayed_spec_is_bit_exact(rng):
    features = _matrix(rng.normal(size=(300, 4)))
    normed, spec = normalize(features, q_low=0.1, q_high=0.9)
    replayed = apply_normalization(features, spec.model_validate_json(spec.model_dump_json()))
    np.testing.assert_array_equal(normed.values, replayed.values)


def test_normalize_idempotent_with_full_range(rng):
    first, _ = normalize(_matrix(rng.uniform(size=(200, 2))), q_low=0.0, q_high=1.0)
    second, _ = normalize(first, q_low=0.0, q_high=1.0)
    np.testing.assert_allclose(first.values, second.values, atol=1e-12)


def test_normalized_split_channels_stay_exclusive(rng):
    prices = 100 + np.cumsum(rng.normal(size=400))
    normed, _ = normalize(make_difference_features(VwapSeries.from_prices(prices), lags=2))
    assert not np.any((normed.values[:, 0] > 0) & (normed.values[:, 2] > 0))
    assert not np.any((normed.values[:, 1] > 0) & (normed.values[:, 3] > 0))


def test_normalize_empty():
    with pytest.raises(DataError):
        normalize(_matrix(np.empty((0, 1))))


# =============================================================================
# Encoding
# =============================================================================

def test_encode_zero_and_one():
    tensor = encode_poisson(_matrix([[0.0, 1.0]]), timesteps=37, seed=1)
    assert tensor.shape == (1, 2, 37)
    assert not tensor.spikes[0, 0].any()
    assert tensor.spikes[0, 1].all()


def test_encode_half_rate():
    tensor = encode_poisson(_matrix(np.full(10_000, 0.5)), timesteps=20, seed=3)
    mean_count = tensor.spikes.sum(axis=2).mean()
    assert 9.8 <= mean_count <= 10.2


def test_encode_frequency_converges(rng):
    for x in rng.uniform(size=5):
        tensor = encode_poisson(_matrix(np.full(2_000, x)), timesteps=50, seed=int(x * 1e6))
        n = tensor.spikes.size
        sigma = np.sqrt(x * (1 - x) / n)
        assert abs(tensor.spikes.mean() - x) <= 4 * sigma + 1e-12


def test_encode_deterministic_and_row_independent(rng):
    features = _matrix(rng.uniform(size=(50, 3)))
    full = encode_poisson(features, timesteps=20, seed=9)
    again = encode_poisson(features, timesteps=20, seed=9)
    tail = encode_poisson(features.take(slice(30, 50)), timesteps=20, seed=9)
    np.testing.assert_array_equal(full.spikes, again.spikes)
    np.testing.assert_array_equal(full.spikes[30:], tail.spikes)
    assert not np.array_equal(full.spikes, encode_poisson(features, timesteps=20, seed=10).spikes)


def test_encode_rejects_unnormalized():
    with pytest.raises(UnnormalizedInputError, match="unnormalized input"):
        encode_poisson(_matrix([[1.5]]))
    with pytest.raises(UnnormalizedInputError):
        encode_poisson(_matrix([[-0.1]]))


# =============================================================================
# Container
# =============================================================================

def test_container_spikes_and_features(tmp_path, rng):
    tensor = SpikeTensor(spikes=rng.integers(0, 2, size=(7, 3, 13)))
    write_spikes(tensor, tmp_path / "s.bin")
    np.testing.assert_array_equal(read_spikes(tmp_path / "s.bin").spikes, tensor.spikes)

    values = rng.normal(size=(5, 4))
    path = write_features(values, tmp_path / "f.bin")
    assert path.read_bytes()[:4] == b"SNNT"
    np.testing.assert_array_equal(read_features(path), values)


def test_container_kind_mismatch(tmp_path):
    write_features(np.zeros((2, 2)), tmp_path / "f.bin")
    with pytest.raises(DataError):
        read_spikes(tmp_path / "f.bin")
