"""
Spike Forecaster - Supervised Training
"""

from supervised.loss import count_mse_loss
from supervised.model import SpikingClassifier, predict_classes
from supervised.surrogate import FastSigmoidSpike, spike_fn, surrogate_grad
from supervised.trainer import SupervisedResult, train_supervised, write_loss_history

__all__ = [
    "FastSigmoidSpike",
    "SpikingClassifier",
    "SupervisedResult",
    "count_mse_loss",
    "predict_classes",
    "spike_fn",
    "surrogate_grad",
    "train_supervised",
    "write_loss_history",
]
