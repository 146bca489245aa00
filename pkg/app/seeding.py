"""
Spike Forecaster - Seeding

All randomness flows from one root seed through named substreams
(encode, init, tpe, strategy-random, ...). Substreams are derived with
numpy's SeedSequence so they are independent and stable across runs.
"""

import hashlib

import numpy as np

ENCODE = "encode"
INIT = "init"
TPE = "tpe"
STRATEGY_RANDOM = "strategy-random"
SYNTH = "synth"
TRAIN = "train"


def _name_key(name: str) -> int:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], byteorder="little")


def seed_sequence(root: int, name: str, *indices: int) -> np.random.SeedSequence:
    """SeedSequence for substream `name` at position `indices`."""
    return np.random.SeedSequence(entropy=root, spawn_key=(_name_key(name), *indices))


def derive_seed(root: int, name: str, *indices: int) -> int:
    """Derive a 63-bit integer seed for a named substream."""
    state = seed_sequence(root, name, *indices).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)


def make_rng(root: int, name: str, *indices: int) -> np.random.Generator:
    """Generator seeded from a named substream."""
    return np.random.default_rng(seed_sequence(root, name, *indices))
