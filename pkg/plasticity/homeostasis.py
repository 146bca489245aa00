"""
Spike Forecaster - Synaptic Homeostasis

When a synapse group's mean absolute weight exceeds the trigger, every
weight in the group shrinks by 5%.
"""

import numpy as np

from snn.topology import SynapseSign

HOMEOSTASIS_TRIGGER = 0.5
HOMEOSTASIS_FACTOR = 0.95


def homeostasis(
    weights: np.ndarray,
    sign: SynapseSign = SynapseSign.EXCITATORY,
    trigger: float = HOMEOSTASIS_TRIGGER,
    factor: float = HOMEOSTASIS_FACTOR,
) -> tuple[np.ndarray, bool]:
    """
    Returns:
        (weights', applied) with weights' clamped to the sign bounds.
    """
    weights = np.asarray(weights, dtype=np.float64)
    applied = bool(weights.size) and float(np.mean(np.abs(weights))) > trigger
    if applied:
        weights = factor * weights
    low, high = sign.bounds
    return np.clip(weights, low, high), applied
