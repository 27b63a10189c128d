"""
Feature Hashing
===============

Atoms (words, tags, sentinels) are hashed once with a seedless 64-bit
BLAKE2b digest. A feature's index mixes the template id, its atom hashes,
direction and distance bucket with a splitmix64 finalizer and keeps the
low hash_bits bits. Everything is vectorised over numpy uint64 arrays.
"""

import hashlib
from functools import lru_cache
from typing import Sequence

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# marks a distance-free copy of a template
NO_DISTANCE = np.uint64(0xFFFFFFFF)


@lru_cache(maxsize=1 << 16)
def hash_atom(text: str) -> int:
    """Seedless 64-bit hash of an atom string"""
    return int.from_bytes(hashlib.blake2b(text.encode('utf-8'), digest_size=8).digest(), 'little')


def hash_atoms(texts: Sequence[str]) -> np.ndarray:
    return np.fromiter((hash_atom(t) for t in texts), dtype=np.uint64, count=len(texts))


def _mix(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> _S30)
    x = x * _M1
    x = x ^ (x >> _S27)
    x = x * _M2
    return x ^ (x >> _S31)


def combine(template_id: int, columns: Sequence[np.ndarray]) -> np.ndarray:
    """64-bit hashes of one template over aligned uint64 columns"""
    seed = np.uint64(((template_id + 1) * _GOLDEN) & _MASK64)
    h = np.full(len(columns[0]), seed, dtype=np.uint64)
    for column in columns:
        h = _mix(h ^ column)
    return h


def reduce_hashes(hashes: np.ndarray, hash_bits: int) -> np.ndarray:
    """Table indices: hash modulo 2**hash_bits"""
    return (hashes & np.uint64((1 << hash_bits) - 1)).astype(np.int64)
