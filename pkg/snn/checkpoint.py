"""
Spike Forecaster - Network Checkpoints

JSON document with the topology descriptor, LIF parameters, decoding
threshold and every weight matrix. orjson writes floats in shortest
round-trip form, so a save/load cycle is bit-exact.
"""

from pathlib import Path
from typing import Union

import numpy as np

from app.exceptions import DataError
from app.schemas import ModelVariant
from snn.lif import LifParams
from snn.network import Network
from snn.topology import build_topology
from storage.artifacts import read_json, write_json

CHECKPOINT_VERSION = 1


def network_to_dict(network: Network) -> dict:
    return {
        "version": CHECKPOINT_VERSION,
        "topology": network.topology.descriptor(),
        "lif": {
            "beta": network.lif.beta,
            "v_thresh": network.lif.v_thresh,
            "refractory_steps": network.lif.refractory_steps,
        },
        "d_thresh": network.d_thresh,
        "weights": {name: np.ascontiguousarray(w) for name, w in network.weights.items()},
    }


def network_from_dict(document: dict) -> Network:
    try:
        if document["version"] != CHECKPOINT_VERSION:
            raise DataError(f"Unsupported checkpoint version {document['version']}")
        descriptor = document["topology"]
        topology = build_topology(
            ModelVariant(descriptor["variant"]),
            n_input=int(descriptor["n_input"]),
            n_hidden=int(descriptor["n_hidden"]),
        )
        lif = LifParams(**document["lif"])
        weights = {
            name: np.asarray(values, dtype=np.float64).reshape(topology.group(name).shape)
            for name, values in document["weights"].items()
        }
        return Network(topology=topology, lif=lif, weights=weights, d_thresh=int(document["d_thresh"]))
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"Malformed checkpoint: {e}")


def save_checkpoint(network: Network, path: Union[str, Path]) -> Path:
    return write_json(network_to_dict(network), path)


def load_checkpoint(path: Union[str, Path]) -> Network:
    return network_from_dict(read_json(path))
