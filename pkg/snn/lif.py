"""
Spike Forecaster - LIF Neuron Dynamics

Discrete leaky integrate-and-fire update with unit resistance:

    V <- beta * V + I
    spike if V >= v_thresh, then V <- V - v_thresh

The refractory window starts at the spike step itself. A neuron emits at
most one spike per step, however far its potential overshoots, and with
the fixed one-step window it may fire again on the very next step, so a
layer can spike on every step it receives input.
"""

from dataclasses import dataclass

import numpy as np

from app.exceptions import ValidationError


@dataclass(frozen=True, slots=True)
class LifParams:
    beta: float
    v_thresh: float
    refractory_steps: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.beta < 1.0:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.v_thresh > 0.0:
            raise ValidationError(f"v_thresh must be positive, got {self.v_thresh}")
        if self.refractory_steps != 1:
            raise ValidationError("refractory_steps is fixed at 1")


def step_lif(
    potential: np.ndarray,
    refractory: np.ndarray,
    current: np.ndarray,
    params: LifParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Advance a population by one step.

    Args:
        refractory: Steps of the refractory window still held by each
            neuron, counting the step in which it spiked.

    Returns:
        (potential', refractory', spikes) with spikes as a boolean array.
    """
    held = np.maximum(refractory - 1, 0)
    blocked = held > 0
    potential = params.beta * potential + np.where(blocked, 0.0, current)
    spikes = (potential - params.v_thresh >= 0.0) & ~blocked
    potential = potential - params.v_thresh * spikes
    refractory = np.where(spikes, params.refractory_steps, held)
    return potential, refractory, spikes
