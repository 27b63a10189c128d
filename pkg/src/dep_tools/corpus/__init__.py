"""
DEP-TOOLS Corpus
================

Treebank I/O and structural validity.
"""

from .tree import (
    ROOT_FORM,
    ROOT_POS,
    NO_HEAD,
    Sentence,
    DependencyTree,
    validate_heads,
    is_projective,
    sibling_parts,
)
from .conll import (
    Example,
    parse_conll,
    parse_conll_sentences,
    write_conll,
    read_conll_file,
    write_conll_file,
    trainable_examples,
)

__all__ = [
    'ROOT_FORM',
    'ROOT_POS',
    'NO_HEAD',
    'Sentence',
    'DependencyTree',
    'validate_heads',
    'is_projective',
    'sibling_parts',
    'Example',
    'parse_conll',
    'parse_conll_sentences',
    'write_conll',
    'read_conll_file',
    'write_conll_file',
    'trainable_examples',
]
