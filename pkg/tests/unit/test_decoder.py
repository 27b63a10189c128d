"""
Unit tests for the Eisner decoders and the exhaustive oracle
============================================================
"""

import numpy as np
import pytest

from dep_tools.corpus.tree import DependencyTree, Sentence, is_projective
from dep_tools.decoder import (
    MAX_ENUMERATION_LENGTH,
    DependencyParser,
    brute_force_decode,
    count_projective_trees,
    eisner_decode,
    eisner_decode_second_order,
    enumerate_projective_trees,
    tree_score,
)
from dep_tools.exceptions import ContractViolation, EnumerationLimitError
from dep_tools.features import FeatureConfig

TREE_COUNTS = [1, 2, 7, 30, 143, 728, 3876, 21318]


def _random_matrix(rng, n):
    return rng.normal(size=(n + 1, n + 1))


def _random_siblings(rng, n):
    return rng.normal(size=(n + 1, n + 1, n + 1))


class TestEnumeration:
    """GEN(x): projective trees with a single ROOT dependent"""

    def test_counts(self):
        assert [count_projective_trees(n) for n in range(1, 9)] == TREE_COUNTS

    @pytest.mark.parametrize("n", range(1, 7))
    def test_enumeration_matches_count(self, n):
        trees = [tree.heads for tree in enumerate_projective_trees(n)]
        assert len(trees) == TREE_COUNTS[n - 1]
        assert len(set(trees)) == len(trees)

    def test_every_tree_is_single_rooted_and_projective(self):
        for tree in enumerate_projective_trees(5):
            assert len(tree.root_children) == 1
            assert is_projective(tree)

    def test_limit(self):
        with pytest.raises(EnumerationLimitError):
            list(enumerate_projective_trees(MAX_ENUMERATION_LENGTH + 1))

    def test_empty_sentence(self):
        with pytest.raises(ContractViolation):
            list(enumerate_projective_trees(0))

    def test_limit_is_a_contract_violation(self):
        assert issubclass(EnumerationLimitError, ContractViolation)


class TestFirstOrder:
    """eisner_decode against brute force"""

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_oracle_equivalence(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(40):
            matrix = _random_matrix(rng, n)
            tree, score = eisner_decode(matrix)
            best, best_score = brute_force_decode(lambda t: tree_score(matrix, t.heads), n)
            assert score == best_score
            assert tree.heads == best.heads

    def test_single_token(self):
        tree, score = eisner_decode(np.array([[0.0, 2.5], [0.0, 0.0]]))
        assert tree.heads == (-1, 0)
        assert score == 2.5

    def test_single_root_dependent(self):
        # ROOT strongly prefers every token; only one may attach to it
        matrix = np.zeros((4, 4))
        matrix[0, 1:] = 10.0
        tree, _ = eisner_decode(matrix)
        assert len(tree.root_children) == 1
        assert is_projective(tree)

    def test_shift_invariance(self):
        rng = np.random.default_rng(7)
        matrix = _random_matrix(rng, 5)
        shifted = matrix + 3.0
        assert eisner_decode(matrix)[0].heads == eisner_decode(shifted)[0].heads

    def test_reported_score_is_tree_score(self):
        matrix = _random_matrix(np.random.default_rng(8), 6)
        tree, score = eisner_decode(matrix)
        assert score == tree_score(matrix, tree.heads)

    def test_non_square_matrix(self):
        with pytest.raises(ContractViolation):
            eisner_decode(np.zeros((3, 4)))

    def test_empty_matrix(self):
        with pytest.raises(ContractViolation):
            eisner_decode(np.zeros((1, 1)))


class TestSecondOrder:
    """eisner_decode_second_order against brute force"""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_oracle_equivalence(self, n):
        rng = np.random.default_rng(200 + n)
        for _ in range(40):
            matrix = _random_matrix(rng, n)
            siblings = _random_siblings(rng, n)
            tree, score = eisner_decode_second_order(matrix, siblings)
            best, best_score = brute_force_decode(
                lambda t: tree_score(matrix, t.heads, siblings), n
            )
            assert score == best_score
            assert tree.heads == best.heads

    def test_zero_siblings_reduce_to_first_order(self):
        rng = np.random.default_rng(9)
        matrix = _random_matrix(rng, 6)
        siblings = np.zeros((7, 7, 7))
        first, first_score = eisner_decode(matrix)
        second, second_score = eisner_decode_second_order(matrix, siblings)
        assert first.heads == second.heads
        assert first_score == second_score

    def test_single_token(self):
        siblings = np.zeros((2, 2, 2))
        siblings[0, 1, 0] = 1.0
        tree, score = eisner_decode_second_order(np.zeros((2, 2)), siblings)
        assert tree.heads == (-1, 0)
        assert score == 1.0

    def test_sibling_table_shape(self):
        with pytest.raises(ContractViolation):
            eisner_decode_second_order(np.zeros((4, 4)), np.zeros((3, 3, 3)))


class TestDependencyParser:
    """Parser facade"""

    def test_weight_shape_checked(self, feature_config):
        with pytest.raises(ContractViolation):
            DependencyParser(np.zeros(10), feature_config)

    @pytest.mark.parametrize("order", [1, 2])
    def test_parse_returns_decodable_tree(self, order):
        config = FeatureConfig(hash_bits=16, order=order)
        weights = np.random.default_rng(order).normal(size=config.table_size)
        parser = DependencyParser(weights, config)
        sentence = Sentence.from_tokens([("a", "DT"), ("dog", "NN"), ("ran", "VBD")])
        tree, score = parser.parse_with_score(sentence)
        assert isinstance(tree, DependencyTree)
        assert len(tree) == 3
        assert len(tree.root_children) == 1
        assert is_projective(tree)
        assert parser.parse_all([sentence]) == [tree]
