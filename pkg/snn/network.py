"""
Spike Forecaster - Network State

Weights per synapse group plus LIF parameters and the decoding threshold.
Membrane potentials and refractory counters are transient: they are
rebuilt for every timestamp by the simulation engine.
"""

from dataclasses import dataclass

import numpy as np

from app.exceptions import ValidationError
from snn.lif import LifParams
from snn.topology import SynapseSign, Topology

EXCITATORY_INIT = (0.3, 0.7)


@dataclass
class Network:
    topology: Topology
    lif: LifParams
    weights: dict[str, np.ndarray]
    d_thresh: int = 0

    def __post_init__(self) -> None:
        if self.d_thresh < 0:
            raise ValidationError(f"d_thresh must be >= 0, got {self.d_thresh}")
        for group in self.topology.groups:
            if group.name not in self.weights:
                raise ValidationError(f"Missing weights for synapse group {group.name}")
            w = np.asarray(self.weights[group.name], dtype=np.float64)
            if w.shape != group.shape:
                raise ValidationError(
                    f"Weights {group.name} have shape {w.shape}, expected {group.shape}",
                )
            self.weights[group.name] = w

    def clamp(self) -> None:
        """Project every group back into its sign bounds and mask."""
        for group in self.topology.groups:
            low, high = group.sign.bounds
            w = np.clip(self.weights[group.name], low, high)
            self.weights[group.name] = np.where(group.mask, w, 0.0)

    def within_bounds(self) -> bool:
        for group in self.topology.groups:
            low, high = group.sign.bounds
            w = self.weights[group.name]
            if not np.all(np.isfinite(w)):
                return False
            if np.any(w < low) or np.any(w > high):
                return False
        return True

    def copy(self) -> "Network":
        return Network(
            topology=self.topology,
            lif=self.lif,
            weights={k: v.copy() for k, v in self.weights.items()},
            d_thresh=self.d_thresh,
        )


def init_network(
    topology: Topology,
    lif: LifParams,
    seed: int,
    d_thresh: int = 0,
    init_range: tuple[float, float] = EXCITATORY_INIT,
) -> Network:
    """
    Random initial weights, deterministic per seed.

    Excitatory groups draw from U[init_range], inhibitory groups from the
    mirrored negative range. Free-sign groups use U[-1/sqrt(fan_in),
    1/sqrt(fan_in)].
    """
    low, high = init_range
    if not 0.0 <= low <= high <= 1.0:
        raise ValidationError(f"init_range must satisfy 0 <= low <= high <= 1, got {init_range}")

    rng = np.random.default_rng(seed)
    weights: dict[str, np.ndarray] = {}
    for group in topology.groups:
        shape = group.shape
        if group.sign is SynapseSign.EXCITATORY:
            w = rng.uniform(low, high, size=shape)
        elif group.sign is SynapseSign.INHIBITORY:
            w = -rng.uniform(low, high, size=shape)
        else:
            bound = 1.0 / np.sqrt(shape[0])
            w = rng.uniform(-bound, bound, size=shape)
        weights[group.name] = np.where(group.mask, w, 0.0)

    return Network(topology=topology, lif=lif, weights=weights, d_thresh=d_thresh)
