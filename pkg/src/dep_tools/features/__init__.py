"""
DEP-TOOLS Features
==================

Hashed MSTParser-style edge and sibling features.
"""

from .config import FeatureConfig, DEFAULT_DISTANCE_BUCKETS
from .vector import FeatureVector
from .hashing import hash_atom, hash_atoms
from .templates import (
    EDGE_TEMPLATES,
    BETWEEN_TEMPLATE,
    SIBLING_TEMPLATES,
    NONE_ATOM,
    NULL_ATOM,
    FeatureKey,
    SentenceEncoding,
    encode_sentence,
    edge_feature_keys,
    sibling_feature_keys,
    feature_index,
    template_count,
    edge_feature_indices,
    sibling_feature_indices,
    tree_feature_indices,
    extract_edge_features,
    extract_sibling_features,
    tree_feature_vector,
)

__all__ = [
    'hash_atom',
    'hash_atoms',
    'EDGE_TEMPLATES',
    'BETWEEN_TEMPLATE',
    'SIBLING_TEMPLATES',
    'NONE_ATOM',
    'NULL_ATOM',
    'FeatureConfig',
    'DEFAULT_DISTANCE_BUCKETS',
    'FeatureVector',
    'FeatureKey',
    'SentenceEncoding',
    'encode_sentence',
    'edge_feature_keys',
    'sibling_feature_keys',
    'feature_index',
    'template_count',
    'edge_feature_indices',
    'sibling_feature_indices',
    'tree_feature_indices',
    'extract_edge_features',
    'extract_sibling_features',
    'tree_feature_vector',
]
