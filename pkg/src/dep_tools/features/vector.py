"""
Sparse feature vectors.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np


def _merge(indices: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sum values per distinct index; result sorted by index"""
    if indices.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    unique, inverse = np.unique(indices, return_inverse=True)
    sums = np.bincount(inverse.ravel(), weights=values, minlength=unique.size)
    return unique.astype(np.int64), np.rint(sums).astype(np.int64)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Sorted distinct feature indices with positive counts"""
    indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    counts: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @classmethod
    def from_indices(cls, raw: np.ndarray) -> "FeatureVector":
        """Count repeated raw indices"""
        indices, counts = np.unique(np.asarray(raw, dtype=np.int64), return_counts=True)
        return cls(indices.astype(np.int64), counts.astype(np.int64))

    @classmethod
    def from_dict(cls, entries: Dict[int, int]) -> "FeatureVector":
        items = sorted((i, c) for i, c in entries.items() if c)
        return cls(
            np.array([i for i, _ in items], dtype=np.int64),
            np.array([c for _, c in items], dtype=np.int64),
        )

    def __len__(self) -> int:
        return int(self.indices.size)

    @property
    def total(self) -> int:
        """Sum of counts, i.e. the number of template firings"""
        return int(self.counts.sum())

    def __add__(self, other: "FeatureVector") -> "FeatureVector":
        indices, counts = _merge(
            np.concatenate([self.indices, other.indices]),
            np.concatenate([self.counts, other.counts]).astype(np.float64),
        )
        return FeatureVector(indices, counts)

    def difference(self, other: "FeatureVector") -> Tuple[np.ndarray, np.ndarray]:
        """(indices, signed deltas) of self - other, zero deltas dropped"""
        indices, deltas = _merge(
            np.concatenate([self.indices, other.indices]),
            np.concatenate([self.counts, -other.counts]).astype(np.float64),
        )
        keep = deltas != 0
        return indices[keep], deltas[keep]

    def as_dict(self) -> Dict[int, int]:
        return {int(i): int(c) for i, c in zip(self.indices, self.counts)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return bool(
            np.array_equal(self.indices, other.indices) and np.array_equal(self.counts, other.counts)
        )

    def __repr__(self) -> str:
        return f"FeatureVector(nnz={len(self)}, total={self.total})"
