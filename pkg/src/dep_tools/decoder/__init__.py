"""
DEP-TOOLS Decoder
=================

Eisner first/second-order dynamic programs and the exhaustive oracle.
"""

from .eisner import eisner_decode, tree_score
from .second_order import eisner_decode_second_order
from .oracle import (
    MAX_ENUMERATION_LENGTH,
    enumerate_projective_trees,
    count_projective_trees,
    brute_force_decode,
)
from .parser import ScoreTables, decode_sentence, DependencyParser

__all__ = [
    'eisner_decode',
    'tree_score',
    'eisner_decode_second_order',
    'MAX_ENUMERATION_LENGTH',
    'enumerate_projective_trees',
    'count_projective_trees',
    'brute_force_decode',
    'ScoreTables',
    'decode_sentence',
    'DependencyParser',
]
