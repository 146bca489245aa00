"""
Spike Forecaster - Simulation Engine

Presents each timestamp's K x T spike trains to a network. Layers are
stepped in propagation order; a spike emitted at step t reaches the next
layer at step t + 1. Potentials and refractory counters start from zero
for every timestamp, so timestamps are independent and can be batched.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.exceptions import ShapeMismatchError
from app.schemas import ModelVariant
from preprocessing.encoding import SpikeTensor
from snn.lif import step_lif
from snn.network import Network


@dataclass
class SimOutput:
    """Spike rasters (T x n per layer, inputs included) and output counts."""
    rasters: dict[str, np.ndarray]
    output_counts: np.ndarray

    @property
    def output_count(self) -> int:
        return int(self.output_counts[0])


def _as_batch(network: Network, spikes: np.ndarray) -> np.ndarray:
    spikes = np.asarray(spikes)
    if spikes.ndim != 3:
        raise ShapeMismatchError(f"Expected (N, K, T) spikes, got shape {spikes.shape}")
    width = network.topology.input_width
    if spikes.shape[1] != width:
        raise ShapeMismatchError(
            f"Input has {spikes.shape[1]} channels, network expects {width}",
            details={"expected": width, "got": int(spikes.shape[1])},
        )
    return spikes.astype(np.float64)


def _run(network: Network, inputs: np.ndarray, record: bool) -> tuple[np.ndarray, Optional[dict[str, np.ndarray]]]:
    topology = network.topology
    batch, _, timesteps = inputs.shape
    layers = topology.layers

    potential = {name: np.zeros((batch, layers[name])) for name in topology.hidden_layers}
    refractory = {name: np.zeros((batch, layers[name]), dtype=np.int64) for name in topology.hidden_layers}
    previous = {name: np.zeros((batch, size)) for name, size in layers.items()}
    counts = np.zeros((batch, topology.output_width), dtype=np.int64)
    rasters = {name: np.zeros((timesteps, batch, size), dtype=np.uint8) for name, size in layers.items()} if record else None

    offsets: dict[str, tuple[int, int]] = {}
    start = 0
    for name in topology.input_layers:
        offsets[name] = (start, start + layers[name])
        start += layers[name]

    for t in range(timesteps):
        current_spikes: dict[str, np.ndarray] = {}
        for name in topology.input_layers:
            lo, hi = offsets[name]
            current_spikes[name] = inputs[:, lo:hi, t]

        for name in topology.hidden_layers:
            current = np.zeros((batch, layers[name]))
            for group in topology.incoming(name):
                pre = np.concatenate([previous[s] for s in group.sources], axis=1)
                current = current + pre @ network.weights[group.name]
            potential[name], refractory[name], fired = step_lif(
                potential[name], refractory[name], current, network.lif,
            )
            current_spikes[name] = fired.astype(np.float64)

        counts += current_spikes[topology.output_layer].astype(np.int64)
        if rasters is not None:
            for name, spikes in current_spikes.items():
                rasters[name][t] = spikes
        previous = current_spikes

    return counts, rasters


def simulate_timestamp(network: Network, spikes: np.ndarray) -> SimOutput:
    """
    Simulate one timestamp.

    Args:
        network: Network to run; weights are not modified.
        spikes: K x T binary input.

    Raises:
        ShapeMismatchError: K differs from the topology's input width.
    """
    spikes = np.asarray(spikes)
    if spikes.ndim != 2:
        raise ShapeMismatchError(f"Expected K x T spikes, got shape {spikes.shape}")
    counts, rasters = _run(network, _as_batch(network, spikes[None]), record=True)
    assert rasters is not None
    return SimOutput(
        rasters={name: r[:, 0, :] for name, r in rasters.items()},
        output_counts=counts[0],
    )


def simulate_batch(network: Network, tensor: SpikeTensor | np.ndarray, chunk_size: int = 4096) -> np.ndarray:
    """Output spike counts for every timestamp, shape (N, n_out)."""
    spikes = tensor.spikes if isinstance(tensor, SpikeTensor) else np.asarray(tensor)
    n_out = network.topology.output_width
    if spikes.shape[0] == 0:
        return np.zeros((0, n_out), dtype=np.int64)
    parts = []
    for lo in range(0, spikes.shape[0], chunk_size):
        counts, _ = _run(network, _as_batch(network, spikes[lo:lo + chunk_size]), record=False)
        parts.append(counts)
    return np.concatenate(parts, axis=0)


def decode(output_count: int | np.ndarray, d_thresh: int) -> bool | np.ndarray:
    """Spike prediction iff the output count strictly exceeds d_thresh."""
    result = np.asarray(output_count) > d_thresh
    return bool(result) if result.ndim == 0 else result


def decode_counts(network: Network, counts: np.ndarray) -> np.ndarray:
    """
    Boolean spike predictions from output counts.

    Models 1/2 threshold their single output neuron; Model 3 predicts the
    spike class when its count is strictly larger (ties go to no-spike).
    """
    if network.topology.variant is ModelVariant.MODEL3:
        return counts[:, 1] > counts[:, 0]
    return decode(counts[:, 0], network.d_thresh)


def predict(network: Network, tensor: SpikeTensor | np.ndarray) -> np.ndarray:
    return decode_counts(network, simulate_batch(network, tensor))
