"""
Spike Forecaster - Poisson Rate Encoding

Each normalized value x becomes a train of T independent Bernoulli(x)
draws (spike when u < x). Every row gets its own counter-based Philox
stream keyed by the seed and addressed by the row's bar index, so a row
encodes identically whatever else is encoded with it.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.exceptions import UnnormalizedInputError, ValidationError
from preprocessing.features import FeatureMatrix


@dataclass
class SpikeTensor:
    """Binary spikes indexed (timestamp, channel, timestep)."""
    spikes: np.ndarray
    row_index: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.spikes = np.asarray(self.spikes, dtype=np.uint8)
        if self.spikes.ndim != 3:
            raise ValidationError(f"Spike tensor must be 3-D, got shape {self.spikes.shape}")
        if self.spikes.size and self.spikes.max() > 1:
            raise ValidationError("Spike tensor must be binary")
        if self.row_index is None:
            self.row_index = np.arange(self.spikes.shape[0], dtype=np.int64)

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(self.spikes.shape)  # type: ignore[return-value]

    @property
    def n_timestamps(self) -> int:
        return self.spikes.shape[0]

    @property
    def n_channels(self) -> int:
        return self.spikes.shape[1]

    @property
    def timesteps(self) -> int:
        return self.spikes.shape[2]

    def take(self, rows: np.ndarray | slice) -> "SpikeTensor":
        return SpikeTensor(spikes=self.spikes[rows], row_index=self.row_index[rows])


def _philox_key(seed: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)


def encode_poisson(
    features: FeatureMatrix | np.ndarray,
    timesteps: int = 20,
    seed: int = 0,
) -> SpikeTensor:
    """
    Poisson-encode normalized features.

    Args:
        features: Values in [0, 1], shape (N, K).
        timesteps: Train length T.
        seed: Encoding seed; the same seed and rows give the same spikes.

    Raises:
        UnnormalizedInputError: a value lies outside [0, 1] or is not finite.
    """
    if timesteps < 1:
        raise ValidationError(f"timesteps must be >= 1, got {timesteps}")

    if isinstance(features, FeatureMatrix):
        values = features.values
        row_index = features.row_index
    else:
        values = np.asarray(features, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        row_index = np.arange(values.shape[0], dtype=np.int64)

    if not np.all(np.isfinite(values)) or values.min(initial=0.0) < 0.0 or values.max(initial=0.0) > 1.0:
        raise UnnormalizedInputError()

    n_rows, n_channels = values.shape
    spikes = np.empty((n_rows, n_channels, timesteps), dtype=np.uint8)
    key = _philox_key(seed)
    for i in range(n_rows):
        rng = np.random.Generator(np.random.Philox(key=key, counter=[0, 0, 0, int(row_index[i])]))
        draws = rng.random((n_channels, timesteps))
        spikes[i] = draws < values[i][:, None]

    return SpikeTensor(spikes=spikes, row_index=np.asarray(row_index, dtype=np.int64).copy())
