"""
Spike Forecaster - Unsupervised Trainer

Per timestamp, in order: simulate the network, apply the STDP deltas of
every synapse group and clamp, then run homeostasis on the groups that
received an update.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import structlog

from app.exceptions import ShapeMismatchError
from app.schemas import TrainingLogRow
from plasticity.homeostasis import homeostasis
from plasticity.stdp import StdpParams, apply_stdp
from preprocessing.encoding import SpikeTensor
from snn.engine import simulate_timestamp
from snn.network import Network
from storage.artifacts import write_csv

logger = structlog.get_logger(__name__)

TRAINING_LOG_COLUMNS = ("timestamp_index", "group", "mean_weight", "homeostasis_applied")


@dataclass
class TrainingResult:
    network: Network
    log: list[TrainingLogRow] = field(default_factory=list)
    homeostasis_events: int = 0


def train_unsupervised(
    network: Network,
    tensor: SpikeTensor | np.ndarray,
    params: StdpParams,
    log_every: int = 100,
) -> TrainingResult:
    """
    Train a Model 1/2 network with STDP, mutating its weights in place.

    Args:
        network: Network to train.
        tensor: (N, K, T) input spikes, presented in row order.
        params: Learning-window parameters.
        log_every: Emit one log row per group every this many timestamps
            (and after the last one).
    """
    spikes = tensor.spikes if isinstance(tensor, SpikeTensor) else np.asarray(tensor)
    if spikes.ndim != 3 or spikes.shape[1] != network.topology.input_width:
        raise ShapeMismatchError(
            f"Tensor shape {spikes.shape} does not match input width {network.topology.input_width}",
        )

    groups = network.topology.groups
    result = TrainingResult(network=network)
    applied_since_log = {g.name: False for g in groups}
    n = spikes.shape[0]

    for i in range(n):
        sim = simulate_timestamp(network, spikes[i])
        updated = []
        for group in groups:
            pre = np.concatenate([sim.rasters[s] for s in group.sources], axis=1)
            post = sim.rasters[group.target]
            if pre.any() and post.any():
                delta = apply_stdp(pre, post, params, group.sign)
                low, high = group.sign.bounds
                w = np.clip(network.weights[group.name] + np.where(group.mask, delta, 0.0), low, high)
                network.weights[group.name] = w
                updated.append(group)

        # Homeostasis only reacts to groups that just learned
        for group in updated:
            w, applied = homeostasis(network.weights[group.name], group.sign)
            network.weights[group.name] = w
            if applied:
                applied_since_log[group.name] = True
                result.homeostasis_events += 1

        if (i + 1) % log_every == 0 or i == n - 1:
            for group in groups:
                result.log.append(TrainingLogRow(
                    timestamp_index=i,
                    group=group.name,
                    mean_weight=float(np.mean(network.weights[group.name])),
                    homeostasis_applied=applied_since_log[group.name],
                ))
                applied_since_log[group.name] = False

    logger.debug(
        "Unsupervised training finished",
        timestamps=n,
        homeostasis_events=result.homeostasis_events,
    )
    return result


def write_training_log(rows: list[TrainingLogRow], path: Union[str, Path]) -> Path:
    return write_csv(rows, path, columns=TRAINING_LOG_COLUMNS)
