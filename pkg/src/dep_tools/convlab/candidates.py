"""
Candidate feature matrices.

For a sentence of at most eight tokens every candidate tree is
enumerated once and described by its parts (edges and, for order 2,
sibling parts). Phi of a block of trees is then an incidence matrix
times a parts-by-features matrix over the sentence's local feature
space, which lets margins and radii be computed without looping over
trees in Python.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from dep_tools.corpus.tree import DependencyTree, Sentence, sibling_parts
from dep_tools.decoder.oracle import enumerate_projective_trees
from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import (
    encode_sentence,
    edge_feature_indices,
    sibling_feature_indices,
)
from dep_tools.model.scoring import candidate_edges, candidate_siblings

# trees per incidence block
BLOCK_SIZE = 2048


@dataclass
class CandidateSet:
    trees: List[DependencyTree]
    part_ids: Dict[Tuple[int, ...], int]
    # parts x local features, counts
    part_features: np.ndarray
    # local feature -> global hashed index
    feature_ids: np.ndarray
    order: int

    def _parts(self, heads: Sequence[int]) -> List[int]:
        parts = [self.part_ids[(heads[child], child)] for child in range(1, len(heads))]
        if self.order == 2:
            parts.extend(self.part_ids[part] for part in sibling_parts(heads))
        return parts

    def incidence(self, trees: Sequence[DependencyTree]) -> np.ndarray:
        matrix = np.zeros((len(trees), self.part_features.shape[0]))
        for row, tree in enumerate(trees):
            np.add.at(matrix[row], self._parts(tree.heads), 1.0)
        return matrix

    def phi(self, heads: Sequence[int]) -> np.ndarray:
        """Local Phi of one head array"""
        counts = np.zeros(self.part_features.shape[0])
        np.add.at(counts, self._parts(heads), 1.0)
        return counts @ self.part_features

    def phi_blocks(self) -> Iterator[Tuple[List[DependencyTree], np.ndarray]]:
        """(trees, Phi rows) in blocks of BLOCK_SIZE trees"""
        for start in range(0, len(self.trees), BLOCK_SIZE):
            block = self.trees[start:start + BLOCK_SIZE]
            yield block, self.incidence(block) @ self.part_features


def build_candidates(sentence: Sentence, config: FeatureConfig) -> CandidateSet:
    """
    Raises:
        EnumerationLimitError: more than eight tokens
    """
    n = len(sentence)
    trees = list(enumerate_projective_trees(n))
    encoding = encode_sentence(sentence)

    heads, children = candidate_edges(n)
    indices, owners = edge_feature_indices(encoding, heads, children, config)
    part_keys: List[Tuple[int, ...]] = [(int(h), int(c)) for h, c in zip(heads, children)]
    if config.order == 2:
        sib_heads, sib_children, sib_prevs = candidate_siblings(n)
        sib_indices, sib_owners = sibling_feature_indices(
            encoding, sib_heads, sib_children, sib_prevs, config
        )
        indices = np.concatenate([indices, sib_indices])
        owners = np.concatenate([owners, sib_owners + len(part_keys)])
        part_keys.extend(
            (int(h), int(c), int(s)) for h, c, s in zip(sib_heads, sib_children, sib_prevs)
        )

    feature_ids, local = np.unique(indices, return_inverse=True)
    part_features = np.zeros((len(part_keys), feature_ids.size))
    np.add.at(part_features, (owners, local.ravel()), 1.0)
    return CandidateSet(
        trees=trees,
        part_ids={key: position for position, key in enumerate(part_keys)},
        part_features=part_features,
        feature_ids=feature_ids,
        order=config.order,
    )
