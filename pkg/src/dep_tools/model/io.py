"""
Model File
==========

Binary layout, all little-endian:

    magic        4 bytes  b"DEPW"
    version      uint16
    hash_bits    uint8
    order        uint8
    n_buckets    uint8
    buckets      n_buckets x uint16
    weights      2**hash_bits x float64
"""

import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from pydantic import ValidationError

from dep_tools.exceptions import ContractViolation, ModelFileError
from dep_tools.features.config import FeatureConfig
from dep_tools.utils.debug_logger import debug_log

MAGIC = b"DEPW"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHBBB")


def encode_model(weights: np.ndarray, config: FeatureConfig) -> bytes:
    if weights.shape != (config.table_size,):
        raise ContractViolation(
            f"expected {config.table_size} weights for hash_bits={config.hash_bits}, got {weights.shape}"
        )
    buckets = config.distance_buckets
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, config.hash_bits, config.order, len(buckets))
    header += struct.pack(f"<{len(buckets)}H", *buckets)
    return header + np.ascontiguousarray(weights, dtype="<f8").tobytes()


def decode_model(data: bytes) -> Tuple[np.ndarray, FeatureConfig]:
    if len(data) < _HEADER.size:
        raise ModelFileError("model file is shorter than its header")
    magic, version, hash_bits, order, n_buckets = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ModelFileError(f"bad magic {magic!r}, not a dep-tools model file")
    if version != FORMAT_VERSION:
        raise ModelFileError(f"unsupported model file version {version}")

    offset = _HEADER.size
    bucket_bytes = 2 * n_buckets
    if len(data) < offset + bucket_bytes:
        raise ModelFileError("model file truncated inside the distance buckets")
    buckets = struct.unpack_from(f"<{n_buckets}H", data, offset)
    offset += bucket_bytes

    try:
        config = FeatureConfig(hash_bits=hash_bits, order=order, distance_buckets=tuple(buckets))
    except ValidationError as e:
        raise ModelFileError(f"invalid feature configuration in model header: {e}")

    expected = config.table_size * 8
    if len(data) - offset != expected:
        raise ModelFileError(
            f"weight payload has {len(data) - offset} bytes, expected {expected}"
        )
    weights = np.frombuffer(data, dtype="<f8", offset=offset).astype(np.float64)
    return weights, config


def save_model(path: Union[str, Path], weights: np.ndarray, config: FeatureConfig) -> None:
    """Write averaged (or raw) weights with their feature configuration"""
    Path(path).write_bytes(encode_model(weights, config))
    debug_log.model(f"Saved model to {path}", extra={
        'hash_bits': config.hash_bits,
        'order': config.order,
        'nonzero': int(np.count_nonzero(weights)),
    })


def load_model(path: Union[str, Path]) -> Tuple[np.ndarray, FeatureConfig]:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ModelFileError(f"cannot read model file {path}: {e}")
    weights, config = decode_model(data)
    debug_log.model(f"Loaded model from {path}", extra={
        'hash_bits': config.hash_bits,
        'order': config.order,
    })
    return weights, config
