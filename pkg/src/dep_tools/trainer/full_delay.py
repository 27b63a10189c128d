"""
Full-delay Simulation
=====================

Deterministic single-process simulation of k workers that all decode
against the same stale weights before any of their updates land.

Each time step scans the corpus cyclically from a cursor that persists
between steps, collecting up to k distinct examples misclassified by the
frozen weights. All collected updates are then applied together. A step
that finds 0 < m < k mistakes in a full pass is applied and flagged as
partial; a pass that finds none ends the run.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from dep_tools.corpus.conll import Example
from dep_tools.decoder.parser import ScoreTables
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.model.weights import WeightModel
from dep_tools.trainer.engine import build_context, check_corpus
from dep_tools.trainer.parallel import WorkerContext, check_update_validity, mistake_update
from dep_tools.trainer.trace import FULL_DELAY, StepRecord, TraceWriter, TrainTrace
from dep_tools.utils.debug_logger import debug_log

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 100_000


def _collect_mistakes(
    context: WorkerContext, frozen: np.ndarray, cursor: int, k: int
) -> Tuple[List[Tuple[int, ScoreTables, Tuple[int, ...]]], int]:
    """Scan at most one full pass from cursor; returns (mistakes, new cursor)"""
    size = len(context.corpus)
    found = []
    for _ in range(size):
        index = cursor
        cursor = (cursor + 1) % size
        tables = ScoreTables.build(context.encodings[index], frozen, context.feature_config)
        pred, _ = tables.decode()
        gold = context.corpus[index][1]
        if pred.heads != gold.heads:
            if context.check_updates:
                check_update_validity(tables, pred.heads, gold.heads, f"example {index}")
            found.append((index, tables, pred.heads))
            if len(found) == k:
                break
    return found, cursor


def run_full_delay(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    k: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    initial_weights: Optional[np.ndarray] = None,
    trace_writer: Optional[TraceWriter] = None,
) -> Tuple[TrainTrace, WeightModel]:
    """
    Run the full-delay schedule until a pass finds no mistakes or
    ``max_steps`` steps have been taken.

    Returns:
        Tuple of (trace, model); ``trace.converged`` is False when the
        step cap was hit
    """
    if k < 1:
        raise ContractViolation(f"k must be positive, got {k}")
    if max_steps < 0:
        raise ContractViolation(f"max_steps must be non-negative, got {max_steps}")
    check_corpus(corpus, feature_config)

    if initial_weights is None:
        model = WeightModel.zeros(feature_config)
    else:
        model = WeightModel.from_weights(feature_config, initial_weights)
    context = build_context(corpus, feature_config, model)
    trace = TrainTrace(mode=FULL_DELAY, k=k)

    cursor = 0
    cumulative = 0
    while len(trace.steps) < max_steps:
        frozen = model.weights.copy()
        found, cursor = _collect_mistakes(context, frozen, cursor, k)
        if not found:
            trace.converged = True
            break
        for index, tables, pred_heads in found:
            mistake_update(context, index, tables, pred_heads)
        cumulative += len(found)
        record = StepRecord(
            step=len(trace.steps) + 1,
            k=k,
            mistakes=len(found),
            partial=len(found) < k,
            cumulative_updates=cumulative,
        )
        trace.steps.append(record)
        if trace_writer is not None:
            trace_writer.step(record)
    else:
        # the cap may land exactly on convergence; one more pass tells
        found, _ = _collect_mistakes(context, model.weights.copy(), cursor, 1)
        trace.converged = not found
        if found:
            logger.warning(f"full-delay run stopped at the {max_steps}-step cap before converging")

    trace.model_updates = model.global_updates
    if trace_writer is not None:
        trace_writer.summary(trace)
    debug_log.trainer(f"Full-delay k={k}: {len(trace.steps)} steps", "INFO", extra={
        'full_steps': trace.full_steps,
        'partial_steps': trace.partial_steps,
        'updates': trace.total_updates,
        'converged': trace.converged,
    })
    return trace, model


def train_full_delay(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    k: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    initial_weights: Optional[np.ndarray] = None,
    trace_writer: Optional[TraceWriter] = None,
) -> TrainTrace:
    """Trace of a full-delay run; see ``run_full_delay`` for the final weights"""
    trace, _ = run_full_delay(corpus, feature_config, k, max_steps, initial_weights, trace_writer)
    return trace
