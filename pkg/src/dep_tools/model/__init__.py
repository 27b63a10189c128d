"""
DEP-TOOLS Model
===============

Weights, averaging, score tables and the model file.
"""

from .weights import (
    STRIPES,
    WeightModel,
    process_stripe_locks,
    thread_stripe_locks,
    score_features,
    perceptron_update,
    averaged_weights,
    copy_model,
)
from .scoring import (
    candidate_edges,
    candidate_siblings,
    score_edge_matrix,
    score_sibling_table,
)
from .io import MAGIC, FORMAT_VERSION, encode_model, decode_model, save_model, load_model

__all__ = [
    'STRIPES',
    'WeightModel',
    'process_stripe_locks',
    'thread_stripe_locks',
    'score_features',
    'perceptron_update',
    'averaged_weights',
    'copy_model',
    'candidate_edges',
    'candidate_siblings',
    'score_edge_matrix',
    'score_sibling_table',
    'MAGIC',
    'FORMAT_VERSION',
    'encode_model',
    'decode_model',
    'save_model',
    'load_model',
]
