"""
Score tables for the decoders.

Features are extracted for every candidate part of a sentence in one
vectorised pass and summed against the weights with ``np.bincount``, so
the dynamic programs never touch features.
"""

from typing import Tuple

import numpy as np

from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import (
    SentenceEncoding,
    edge_feature_indices,
    sibling_feature_indices,
)


def candidate_edges(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """All (head, child) with head in 0..n, child in 1..n, head != child"""
    heads, children = np.meshgrid(np.arange(n + 1), np.arange(1, n + 1), indexing='ij')
    keep = heads != children
    return heads[keep].astype(np.int64), children[keep].astype(np.int64)


def candidate_siblings(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    All (head, child, prev) sibling parts; prev == head stands for NULL,
    otherwise prev lies strictly between head and child.
    """
    grid = np.arange(n + 1)
    heads, children, prevs = np.meshgrid(grid, grid, grid, indexing='ij')
    low = np.minimum(heads, children)
    high = np.maximum(heads, children)
    keep = (
        (children >= 1)
        & (heads != children)
        & ((prevs == heads) | ((prevs > low) & (prevs < high)))
    )
    return (
        heads[keep].astype(np.int64),
        children[keep].astype(np.int64),
        prevs[keep].astype(np.int64),
    )


def score_edge_matrix(
    encoding: SentenceEncoding, weights: np.ndarray, config: FeatureConfig
) -> np.ndarray:
    """(n+1)x(n+1) matrix of s(head, child); diagonal and column 0 are 0"""
    n = encoding.n
    heads, children = candidate_edges(n)
    indices, owners = edge_feature_indices(encoding, heads, children, config)
    sums = np.bincount(owners, weights=weights[indices], minlength=heads.size)
    matrix = np.zeros((n + 1, n + 1), dtype=np.float64)
    matrix[heads, children] = sums
    return matrix


def score_sibling_table(
    encoding: SentenceEncoding, weights: np.ndarray, config: FeatureConfig
) -> np.ndarray:
    """(n+1)^3 table; table[h, c, h] scores (h, c, NULL)"""
    n = encoding.n
    heads, children, prevs = candidate_siblings(n)
    indices, owners = sibling_feature_indices(encoding, heads, children, prevs, config)
    sums = np.bincount(owners, weights=weights[indices], minlength=heads.size)
    table = np.zeros((n + 1, n + 1, n + 1), dtype=np.float64)
    table[heads, children, prevs] = sums
    return table
