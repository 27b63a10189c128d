"""
Unit tests for sentences, trees and CoNLL-X I/O
===============================================
"""

import itertools

import numpy as np
import pytest

from dep_tools.corpus.conll import (
    parse_conll,
    parse_conll_sentences,
    read_conll_file,
    trainable_examples,
    write_conll,
    write_conll_file,
)
from dep_tools.corpus.tree import (
    NO_HEAD,
    ROOT_FORM,
    DependencyTree,
    Sentence,
    is_projective,
    sibling_parts,
    validate_heads,
)
from dep_tools.exceptions import (
    ConllFormatError,
    ContractViolation,
    DataError,
    TreeStructureError,
)
from tests.conftest import conll_block, conll_text


def random_heads(rng: np.random.Generator, n: int) -> list:
    """Head array of a uniformly grown random tree over tokens 1..n"""
    heads = [0] * n
    placed = [0]
    for token in rng.permutation(np.arange(1, n + 1)):
        heads[token - 1] = int(rng.choice(placed))
        placed.append(int(token))
    return heads


def has_crossing_arcs(heads: list) -> bool:
    arcs = [tuple(sorted((head, child))) for child, head in enumerate(heads, start=1)]
    for (a, b), (c, d) in itertools.combinations(arcs, 2):
        if a < c < b < d or c < a < d < b:
            return True
    return False


class TestSentence:
    """Sentence construction"""

    def test_root_is_prepended(self):
        sentence = Sentence.from_tokens([("John", "NNP"), ("saw", "VBD")])
        assert sentence.forms[0] == ROOT_FORM
        assert len(sentence) == 2
        assert sentence.tokens == [("John", "NNP"), ("saw", "VBD")]

    def test_empty_sentence_rejected(self):
        with pytest.raises(ValueError):
            Sentence.from_tokens([])

    def test_tab_in_form_rejected(self):
        with pytest.raises(ValueError):
            Sentence.from_tokens([("a\tb", "NN")])

    def test_mirrored(self):
        sentence = Sentence.from_tokens([("a", "X"), ("b", "Y")])
        assert sentence.mirrored().tokens == [("b", "Y"), ("a", "X")]


class TestDependencyTree:
    """Head arrays and structural checks"""

    def test_edges_in_child_order(self):
        tree = DependencyTree.from_heads([2, 0, 2])
        assert list(tree.edges()) == [(2, 1), (0, 2), (2, 3)]
        assert tree.heads[0] == NO_HEAD
        assert tree.root_children == [2]
        assert tree.children_of(2) == [1, 3]

    def test_several_root_dependents_allowed(self):
        tree = DependencyTree.from_heads([0, 0])
        assert tree.root_children == [1, 2]

    @pytest.mark.parametrize("heads", [[2, 1], [1], [0, 3, 2], [0, 5]])
    def test_invalid_heads(self, heads):
        with pytest.raises(TreeStructureError):
            DependencyTree.from_heads(heads)

    def test_validate_heads_needs_tokens(self):
        with pytest.raises(TreeStructureError):
            validate_heads([NO_HEAD])

    def test_projectivity(self):
        assert is_projective(DependencyTree.from_heads([2, 0, 2]))
        # arc 3 -> 1 spans token 2, which hangs off ROOT
        assert not is_projective(DependencyTree.from_heads([3, 0, 2, 1]))

    def test_projectivity_matches_crossing_arcs(self):
        rng = np.random.default_rng(21)
        seen = set()
        for _ in range(500):
            heads = random_heads(rng, int(rng.integers(1, 9)))
            expected = not has_crossing_arcs(heads)
            assert is_projective(DependencyTree.from_heads(heads)) is expected, heads
            seen.add(expected)
        assert seen == {True, False}

    def test_sibling_parts(self):
        # head 2 with left child 1 and right children 3, 4
        heads = (NO_HEAD, 2, 0, 2, 2)
        assert sorted(sibling_parts(heads)) == sorted([
            (0, 2, 0),
            (2, 1, 2),
            (2, 3, 2),
            (2, 4, 3),
        ])

    def test_sibling_parts_left_side_goes_outward(self):
        heads = (NO_HEAD, 3, 3, 0)
        assert (3, 2, 3) in sibling_parts(heads)
        assert (3, 1, 2) in sibling_parts(heads)


class TestConllReader:
    """CoNLL-X parsing"""

    def test_parse(self, toy_conll):
        examples = parse_conll(toy_conll)
        assert len(examples) == 4
        sentence, tree = examples[0]
        assert sentence.tokens == [("John", "NNP"), ("saw", "VBD"), ("Mary", "NNP")]
        assert tree.heads == (NO_HEAD, 2, 0, 2)

    def test_comments_and_extra_blank_lines(self):
        text = "# sent 1\n" + conll_block([("a", "X", 0)]) + "\n\n\n" + conll_block([("b", "Y", 0)])
        assert len(parse_conll(text)) == 2

    def test_round_trip(self, toy_conll):
        examples = parse_conll(toy_conll)
        again = parse_conll(write_conll(examples))
        assert [(s.tokens, t.heads) for s, t in again] == [(s.tokens, t.heads) for s, t in examples]

    def test_round_trip_random_trees(self):
        rng = np.random.default_rng(13)
        examples = []
        for _ in range(50):
            n = int(rng.integers(1, 12))
            tokens = [
                (f"w{int(rng.integers(100))}", f"T{int(rng.integers(5))}") for _ in range(n)
            ]
            examples.append(
                (Sentence.from_tokens(tokens), DependencyTree.from_heads(random_heads(rng, n)))
            )
        again = parse_conll(write_conll(examples))
        assert [(s.tokens, t.heads) for s, t in again] == [
            (s.tokens, t.heads) for s, t in examples
        ]

    def test_write_length_mismatch(self):
        sentence = Sentence.from_tokens([("a", "X"), ("b", "Y")])
        with pytest.raises(ContractViolation):
            write_conll([(sentence, DependencyTree.from_heads([0]))])

    def test_sentences_ignore_heads(self):
        text = conll_block([("a", "X", 0), ("b", "Y", 1)]).replace("\t1\t_\t_\t_", "\t_\t_\t_\t_")
        sentences = parse_conll_sentences(text)
        assert sentences[0].tokens == [("a", "X"), ("b", "Y")]

    def test_wrong_column_count_names_line(self):
        text = conll_block([("a", "X", 0)]) + "\n1\tb\tY\n"
        with pytest.raises(ConllFormatError) as info:
            parse_conll(text)
        assert info.value.line_number == 3

    def test_non_integer_head(self):
        text = conll_block([("a", "X", 0)]).replace("\t0\t", "\tzero\t")
        with pytest.raises(ConllFormatError) as info:
            parse_conll(text)
        assert info.value.line_number == 1

    def test_head_out_of_range(self):
        with pytest.raises(ConllFormatError):
            parse_conll(conll_block([("a", "X", 0), ("b", "Y", 7)]))

    def test_cycle_is_structure_error(self):
        with pytest.raises(TreeStructureError):
            parse_conll(conll_block([("a", "X", 2), ("b", "Y", 1), ("c", "Z", 0)]))

    def test_errors_are_data_errors(self):
        with pytest.raises(DataError):
            parse_conll("1\ta\n")

    def test_file_round_trip(self, tmp_path, toy_conll):
        path = tmp_path / "toy.conll"
        write_conll_file(path, parse_conll(toy_conll))
        assert len(read_conll_file(path)) == 4


class TestTrainableExamples:
    """Filtering of trees outside the decoder's search space"""

    def test_filters_non_projective_and_multi_root(self, toy_conll):
        text = toy_conll + "\n" + conll_text([
            [("a", "X", 3), ("b", "Y", 0), ("c", "Z", 2), ("d", "W", 1)],
            [("a", "X", 0), ("b", "Y", 0)],
        ])
        kept, stats = trainable_examples(parse_conll(text))
        assert len(kept) == 4
        assert stats == {'total': 6, 'non_projective': 1, 'multi_root': 1, 'kept': 4}
