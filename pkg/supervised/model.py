"""
Spike Forecaster - Differentiable Model 3

A torch rendering of the Model 3 topology (input -> h1 -> h2 -> 2 outputs)
that follows the simulation engine step for step: one-step synaptic
delay, leak, one spike per step and reset by subtraction. The spike
indicator used for reset and refractory bookkeeping is detached, so
gradients flow only through the membrane recurrence and the spikes
passed downstream.
"""

import numpy as np
import torch
from torch import nn

from app.exceptions import ShapeMismatchError, ValidationError
from app.schemas import ModelVariant
from snn.lif import LifParams
from snn.network import Network
from snn.topology import Topology
from supervised.surrogate import DEFAULT_SLOPE, spike_fn

LAYER_GROUPS = (("h1", "in_h1"), ("h2", "h1_h2"), ("out", "h2_out"))


class SpikingClassifier(nn.Module):
    def __init__(
        self,
        topology: Topology,
        weights: dict[str, np.ndarray],
        beta: float,
        v_thresh: float,
        slope: float = DEFAULT_SLOPE,
        soft: bool = False,
    ):
        super().__init__()
        if topology.variant is not ModelVariant.MODEL3:
            raise ValidationError(f"SpikingClassifier needs a Model 3 topology, got {topology.variant.value}")
        self.topology = topology
        self.beta = beta
        self.v_thresh = v_thresh
        self.slope = slope
        self.soft = soft
        self.refractory_steps = LifParams(beta=beta, v_thresh=v_thresh).refractory_steps
        self.weights = nn.ParameterDict({
            name: nn.Parameter(torch.tensor(np.asarray(weights[name]), dtype=torch.float64))
            for _, name in LAYER_GROUPS
        })

    @classmethod
    def from_network(cls, network: Network, slope: float = DEFAULT_SLOPE, soft: bool = False) -> "SpikingClassifier":
        return cls(
            topology=network.topology,
            weights=network.weights,
            beta=network.lif.beta,
            v_thresh=network.lif.v_thresh,
            slope=slope,
            soft=soft,
        )

    def to_network(self, d_thresh: int = 0) -> Network:
        return Network(
            topology=self.topology,
            lif=LifParams(beta=self.beta, v_thresh=self.v_thresh),
            weights={name: p.detach().cpu().numpy().copy() for name, p in self.weights.items()},
            d_thresh=d_thresh,
        )

    def forward(self, inputs: torch.Tensor) -> torch.Tensor:
        """
        Args:
            inputs: (B, K, T) spikes as float64.

        Returns:
            (B, 2) output spike counts (differentiable through the surrogate).
        """
        if inputs.ndim != 3 or inputs.shape[1] != self.topology.input_width:
            raise ShapeMismatchError(
                f"Expected (B, {self.topology.input_width}, T) input, got {tuple(inputs.shape)}",
            )
        batch, _, timesteps = inputs.shape
        layers = self.topology.layers
        inputs = inputs.to(torch.float64)

        potential = {name: inputs.new_zeros(batch, layers[name]) for name, _ in LAYER_GROUPS}
        refractory = {name: inputs.new_zeros(batch, layers[name]) for name, _ in LAYER_GROUPS}
        previous = {name: inputs.new_zeros(batch, size) for name, size in layers.items()}
        counts = inputs.new_zeros(batch, layers["out"])

        for t in range(timesteps):
            current_spikes = {"in": inputs[:, :, t]}
            for name, group in LAYER_GROUPS:
                source = self.topology.group(group).sources[0]
                current = previous[source] @ self.weights[group]
                held = torch.clamp(refractory[name] - 1.0, min=0.0)
                gate = (held == 0).to(inputs.dtype)
                v = self.beta * potential[name] + gate * current
                fired = ((v.detach() - self.v_thresh) >= 0).to(v.dtype) * gate
                spikes = spike_fn(v - self.v_thresh, self.slope, self.soft) * gate
                potential[name] = v - self.v_thresh * fired
                refractory[name] = torch.where(fired > 0, fired.new_full((), float(self.refractory_steps)), held)
                current_spikes[name] = spikes
            counts = counts + current_spikes["out"]
            previous = current_spikes

        return counts


def predict_classes(counts: torch.Tensor) -> torch.Tensor:
    """Class 1 (spike) iff its count is strictly larger."""
    return (counts[:, 1] > counts[:, 0]).long()
