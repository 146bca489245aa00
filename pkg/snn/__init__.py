"""
Spike Forecaster - Spiking Network Engine
"""

from snn.checkpoint import load_checkpoint, save_checkpoint
from snn.engine import SimOutput, decode, decode_counts, predict, simulate_batch, simulate_timestamp
from snn.lif import LifParams, step_lif
from snn.network import Network, init_network
from snn.topology import SynapseGroup, SynapseSign, Topology, build_topology

__all__ = [
    "LifParams",
    "Network",
    "SimOutput",
    "SynapseGroup",
    "SynapseSign",
    "Topology",
    "build_topology",
    "decode",
    "decode_counts",
    "init_network",
    "load_checkpoint",
    "predict",
    "save_checkpoint",
    "simulate_batch",
    "simulate_timestamp",
    "step_lif",
]
