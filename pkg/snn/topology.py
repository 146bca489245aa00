"""
Spike Forecaster - Network Topologies

Layer sizes and synapse groups for the three architectures.

Model 1:  X1 -> H1, X2 -> H2 (excitatory, pathway separated),
          H1 + H2 -> out (excitatory)
Model 2:  Model 1 plus inhibitory X1 -> H2 and X2 -> H1
Model 3:  in -> h1 -> h2 -> out(2), dense with free-sign weights
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from app.exceptions import ValidationError
from app.schemas import ModelVariant


class SynapseSign(str, Enum):
    EXCITATORY = "excitatory"
    INHIBITORY = "inhibitory"
    FREE = "free"

    @property
    def bounds(self) -> tuple[float, float]:
        if self is SynapseSign.EXCITATORY:
            return 0.0, 1.0
        if self is SynapseSign.INHIBITORY:
            return -1.0, 0.0
        return -np.inf, np.inf


@dataclass
class SynapseGroup:
    """Weights from the concatenated `sources` layers onto `target`."""
    name: str
    sources: tuple[str, ...]
    target: str
    sign: SynapseSign
    mask: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self.mask.shape)  # type: ignore[return-value]


@dataclass
class Topology:
    """
    Layers in propagation order plus the synapse groups between them.

    Input layers are fed directly by the spike tensor; their channels are
    taken from the tensor in the order the input layers are listed.
    """
    variant: ModelVariant
    layers: dict[str, int]
    input_layers: tuple[str, ...]
    output_layer: str
    groups: list[SynapseGroup] = field(default_factory=list)
    n_input: int = 1
    n_hidden: int = 2

    @property
    def input_width(self) -> int:
        return sum(self.layers[name] for name in self.input_layers)

    @property
    def output_width(self) -> int:
        return self.layers[self.output_layer]

    @property
    def hidden_layers(self) -> list[str]:
        return [name for name in self.layers if name not in self.input_layers]

    def incoming(self, layer: str) -> list[SynapseGroup]:
        return [g for g in self.groups if g.target == layer]

    def group(self, name: str) -> SynapseGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)

    def descriptor(self) -> dict:
        return {"variant": self.variant.value, "n_input": self.n_input, "n_hidden": self.n_hidden}


def _dense(n_pre: int, n_post: int) -> np.ndarray:
    return np.ones((n_pre, n_post), dtype=bool)


def _pathway_topology(variant: ModelVariant, n_input: int, n_hidden: int) -> Topology:
    if n_hidden < 2 or n_hidden % 2:
        raise ValidationError(
            f"n_hidden must be even and >= 2 for the two-pathway split, got {n_hidden}",
            details={"variant": variant.value},
        )
    half = n_hidden // 2
    layers = {"x1": n_input, "x2": n_input, "h1": half, "h2": half, "out": 1}
    groups = [
        SynapseGroup("x1_h1", ("x1",), "h1", SynapseSign.EXCITATORY, _dense(n_input, half)),
        SynapseGroup("x2_h2", ("x2",), "h2", SynapseSign.EXCITATORY, _dense(n_input, half)),
    ]
    if variant is ModelVariant.MODEL2:
        groups += [
            SynapseGroup("x1_h2", ("x1",), "h2", SynapseSign.INHIBITORY, _dense(n_input, half)),
            SynapseGroup("x2_h1", ("x2",), "h1", SynapseSign.INHIBITORY, _dense(n_input, half)),
        ]
    groups.append(SynapseGroup("h_out", ("h1", "h2"), "out", SynapseSign.EXCITATORY, _dense(n_hidden, 1)))
    return Topology(
        variant=variant,
        layers=layers,
        input_layers=("x1", "x2"),
        output_layer="out",
        groups=groups,
        n_input=n_input,
        n_hidden=n_hidden,
    )


def _dense_topology(n_input: int, n_hidden: int) -> Topology:
    if n_hidden < 1:
        raise ValidationError(f"n_hidden must be >= 1, got {n_hidden}")
    layers = {"in": n_input, "h1": n_hidden, "h2": n_hidden, "out": 2}
    groups = [
        SynapseGroup("in_h1", ("in",), "h1", SynapseSign.FREE, _dense(n_input, n_hidden)),
        SynapseGroup("h1_h2", ("h1",), "h2", SynapseSign.FREE, _dense(n_hidden, n_hidden)),
        SynapseGroup("h2_out", ("h2",), "out", SynapseSign.FREE, _dense(n_hidden, 2)),
    ]
    return Topology(
        variant=ModelVariant.MODEL3,
        layers=layers,
        input_layers=("in",),
        output_layer="out",
        groups=groups,
        n_input=n_input,
        n_hidden=n_hidden,
    )


def build_topology(variant: ModelVariant, n_input: int, n_hidden: int) -> Topology:
    """
    Build the layer/synapse layout of a model.

    Args:
        variant: Model 1, 2 or 3.
        n_input: Neurons per input pathway (lags k) for Models 1/2, feature
            channels for Model 3.
        n_hidden: Total hidden neurons (split in half) for Models 1/2,
            neurons per hidden layer for Model 3.
    """
    if n_input < 1:
        raise ValidationError(f"n_input must be >= 1, got {n_input}")
    variant = ModelVariant(variant)
    if variant is ModelVariant.MODEL3:
        return _dense_topology(n_input, n_hidden)
    return _pathway_topology(variant, n_input, n_hidden)
