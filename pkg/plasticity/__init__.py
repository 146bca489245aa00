"""
Spike Forecaster - Unsupervised Plasticity
"""

from plasticity.homeostasis import homeostasis
from plasticity.stdp import StdpParams, apply_stdp, spike_traces, stdp_window
from plasticity.trainer import TrainingResult, train_unsupervised, write_training_log

__all__ = [
    "StdpParams",
    "TrainingResult",
    "apply_stdp",
    "homeostasis",
    "spike_traces",
    "stdp_window",
    "train_unsupervised",
    "write_training_log",
]
