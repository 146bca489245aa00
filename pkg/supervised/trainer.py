"""
Spike Forecaster - Supervised Trainer

Backpropagation through time for Model 3: the T-step simulation is
unrolled by SpikingClassifier, the count loss is backpropagated through
the surrogate spike function and Adam updates the weights once per
mini-batch.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import structlog
import torch

from app.exceptions import ShapeMismatchError
from app.schemas import EpochStats, TrainConfig
from preprocessing.encoding import SpikeTensor
from snn.network import Network
from storage.artifacts import write_csv
from supervised.loss import count_mse_loss
from supervised.model import SpikingClassifier, predict_classes

logger = structlog.get_logger(__name__)

LOSS_HISTORY_COLUMNS = ("epoch", "mean_loss", "train_accuracy")


@dataclass
class SupervisedResult:
    network: Network
    history: list[EpochStats] = field(default_factory=list)


def train_supervised(
    network: Network,
    tensor: SpikeTensor | np.ndarray,
    labels: np.ndarray,
    config: TrainConfig,
    seed: Optional[int] = None,
) -> SupervisedResult:
    """
    Train a Model 3 network. The input network is left untouched.

    Args:
        network: Initial Model 3 network.
        tensor: (N, K, T) input spikes.
        labels: (N,) class per timestamp, 1 for a real spike.
        config: Optimizer, loss and schedule settings.
        seed: Seed for the mini-batch order (defaults to config.seed).

    Raises:
        ShapeMismatchError: labels and tensor disagree in length.
    """
    spikes = tensor.spikes if isinstance(tensor, SpikeTensor) else np.asarray(tensor)
    labels = np.asarray(labels)
    if labels.shape != (spikes.shape[0],):
        raise ShapeMismatchError(
            f"Got {labels.shape[0] if labels.ndim else 0} labels for {spikes.shape[0]} timestamps",
        )

    inputs = torch.from_numpy(spikes.astype(np.float64))
    targets = torch.from_numpy(labels.astype(np.int64))
    n, _, timesteps = inputs.shape

    model = SpikingClassifier.from_network(network, slope=config.surrogate_slope)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    generator = torch.Generator().manual_seed(config.seed if seed is None else seed)

    result = SupervisedResult(network=network)
    for epoch in range(config.epochs):
        order = torch.randperm(n, generator=generator)
        total_loss = 0.0
        correct = 0
        for lo in range(0, n, config.batch_size):
            idx = order[lo:lo + config.batch_size]
            optimizer.zero_grad()
            counts = model(inputs[idx])
            loss = count_mse_loss(counts, targets[idx], timesteps, config.target_hi, config.target_lo)
            loss.backward()
            optimizer.step()

            total_loss += float(loss.item()) * len(idx)
            correct += int((predict_classes(counts.detach()) == targets[idx]).sum())

        stats = EpochStats(
            epoch=epoch,
            mean_loss=total_loss / n if n else 0.0,
            train_accuracy=correct / n if n else 0.0,
        )
        result.history.append(stats)
        logger.info("Epoch completed", epoch=epoch, mean_loss=stats.mean_loss, train_accuracy=stats.train_accuracy)

    result.network = model.to_network(d_thresh=network.d_thresh)
    return result


def write_loss_history(history: list[EpochStats], path: Union[str, Path]) -> Path:
    return write_csv(history, path, columns=LOSS_HISTORY_COLUMNS)
