"""
Parser facade: weights + feature configuration -> trees.
"""

from typing import Iterable, List, Optional, Tuple

import numpy as np

from dep_tools.corpus.tree import DependencyTree, Sentence
from dep_tools.decoder.eisner import eisner_decode
from dep_tools.decoder.second_order import eisner_decode_second_order
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import SentenceEncoding, encode_sentence
from dep_tools.model.scoring import score_edge_matrix, score_sibling_table
from dep_tools.utils.debug_logger import debug_log


class ScoreTables:
    """Edge matrix and, for order 2, sibling table of one sentence"""

    def __init__(self, matrix: np.ndarray, siblings: Optional[np.ndarray] = None):
        self.matrix = matrix
        self.siblings = siblings

    @classmethod
    def build(
        cls, encoding: SentenceEncoding, weights: np.ndarray, config: FeatureConfig
    ) -> "ScoreTables":
        matrix = score_edge_matrix(encoding, weights, config)
        siblings = score_sibling_table(encoding, weights, config) if config.order == 2 else None
        return cls(matrix, siblings)

    def decode(self) -> Tuple[DependencyTree, float]:
        if self.siblings is None:
            return eisner_decode(self.matrix)
        return eisner_decode_second_order(self.matrix, self.siblings)


def decode_sentence(
    encoding: SentenceEncoding, weights: np.ndarray, config: FeatureConfig
) -> Tuple[DependencyTree, float]:
    """argmax over GEN(x) of alpha . Phi(x, z) with the decoder matching config.order"""
    return ScoreTables.build(encoding, weights, config).decode()


class DependencyParser:
    """Decodes sentences with a fixed weight vector (normally the averaged one)"""

    def __init__(self, weights: np.ndarray, config: FeatureConfig):
        if weights.shape != (config.table_size,):
            raise ContractViolation(
                f"weights of shape {weights.shape} do not match hash_bits={config.hash_bits}"
            )
        self.weights = weights
        self.config = config

    def parse(self, sentence: Sentence) -> DependencyTree:
        tree, _ = decode_sentence(encode_sentence(sentence), self.weights, self.config)
        return tree

    def parse_with_score(self, sentence: Sentence) -> Tuple[DependencyTree, float]:
        return decode_sentence(encode_sentence(sentence), self.weights, self.config)

    def parse_all(self, sentences: Iterable[Sentence]) -> List[DependencyTree]:
        with debug_log.timed("parse_all"):
            return [self.parse(sentence) for sentence in sentences]
