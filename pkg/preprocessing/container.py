"""
Spike Forecaster - Binary Container

Layout (little-endian):

    magic    4 bytes  b"SNNT"
    version  u16      1
    kind     u8       1 = float64 features, 2 = bit-packed spikes
    shape    3 x u64  (N, K, T); T is 1 for features
    payload  float64 values row-major, or np.packbits of the spike tensor
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from app.exceptions import DataError, NotFoundError
from preprocessing.encoding import SpikeTensor

MAGIC = b"SNNT"
VERSION = 1
KIND_FEATURES = 1
KIND_SPIKES = 2

_HEADER = struct.Struct("<4sHBQQQ")


def _write(path: Path, kind: int, shape: tuple[int, int, int], payload: bytes) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, kind, *shape))
        f.write(payload)
    return path


def _read(path: Path, kind: int) -> tuple[tuple[int, int, int], bytes]:
    if not path.is_file():
        raise NotFoundError(f"Container not found: {path}", details={"path": str(path)})
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise DataError(f"Truncated container: {path}")
    magic, version, found_kind, n, k, t = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DataError(f"Not a spike container: {path}", details={"magic": magic.hex()})
    if version != VERSION:
        raise DataError(f"Unsupported container version {version}", details={"path": str(path)})
    if found_kind != kind:
        raise DataError(
            f"Container holds kind {found_kind}, expected {kind}",
            details={"path": str(path)},
        )
    return (n, k, t), data[_HEADER.size:]


def write_features(values: np.ndarray, path: Union[str, Path]) -> Path:
    """Write an (N, K) float64 matrix."""
    values = np.ascontiguousarray(values, dtype="<f8")
    n, k = values.shape
    return _write(Path(path), KIND_FEATURES, (n, k, 1), values.tobytes())


def read_features(path: Union[str, Path]) -> np.ndarray:
    (n, k, _), payload = _read(Path(path), KIND_FEATURES)
    if len(payload) != n * k * 8:
        raise DataError(f"Feature payload size mismatch in {path}")
    return np.frombuffer(payload, dtype="<f8").reshape(n, k).astype(np.float64)


def write_spikes(tensor: SpikeTensor, path: Union[str, Path]) -> Path:
    """Write a binary (N, K, T) tensor, eight spikes per byte."""
    packed = np.packbits(tensor.spikes.ravel())
    return _write(Path(path), KIND_SPIKES, tensor.shape, packed.tobytes())


def read_spikes(path: Union[str, Path]) -> SpikeTensor:
    (n, k, t), payload = _read(Path(path), KIND_SPIKES)
    count = n * k * t
    if len(payload) != (count + 7) // 8:
        raise DataError(f"Spike payload size mismatch in {path}")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=count)
    return SpikeTensor(spikes=bits.reshape(n, k, t))
