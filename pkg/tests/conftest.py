"""
Shared fixtures for DEP-TOOLS tests
===================================
"""

from typing import List, Sequence, Tuple

import pytest

from dep_tools.convlab.generator import SeparableSpec, generate_separable_corpus
from dep_tools.features.config import FeatureConfig


def conll_block(tokens: Sequence[Tuple[str, str, int]]) -> str:
    """CoNLL-X lines for (form, tag, head) tokens"""
    lines = []
    for index, (form, tag, head) in enumerate(tokens, start=1):
        lines.append("\t".join([str(index), form, "_", tag, tag, "_", str(head), "_", "_", "_"]))
    return "\n".join(lines) + "\n"


def conll_text(sentences: Sequence[Sequence[Tuple[str, str, int]]]) -> str:
    return "\n".join(conll_block(sentence) for sentence in sentences)


TOY_SENTENCES: List[List[Tuple[str, str, int]]] = [
    [("John", "NNP", 2), ("saw", "VBD", 0), ("Mary", "NNP", 2)],
    [("The", "DT", 2), ("dog", "NN", 3), ("barked", "VBD", 0)],
    [("A", "DT", 2), ("cat", "NN", 3), ("saw", "VBD", 0), ("the", "DT", 5), ("dog", "NN", 3)],
    [("Mary", "NNP", 2), ("slept", "VBD", 0)],
]


@pytest.fixture
def toy_conll() -> str:
    return conll_text(TOY_SENTENCES)


@pytest.fixture
def feature_config() -> FeatureConfig:
    return FeatureConfig(hash_bits=16, order=1)


@pytest.fixture
def second_order_config() -> FeatureConfig:
    return FeatureConfig(hash_bits=16, order=2)


@pytest.fixture(scope="session")
def separable_spec() -> SeparableSpec:
    return SeparableSpec(n_sentences=16, min_length=2, max_length=4, delta=0.5, seed=3)


@pytest.fixture(scope="session")
def separable_data(separable_spec):
    """(corpus, separator) of a small generated separable corpus"""
    return generate_separable_corpus(separable_spec)


@pytest.fixture(scope="session")
def separable_corpus(separable_data):
    return separable_data[0]
