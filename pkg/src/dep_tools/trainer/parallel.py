"""
Perceptron Workers
==================

The per-example loop shared by every training mode, and the executors
that run k copies of it over one epoch's partition.

A worker decodes each of its examples against the current weights and,
on a mistake, adds Phi(gold) - Phi(pred). In locked mode one lock covers
reading the weights into score tables and, separately, applying an
update; the dynamic program itself always runs outside the lock. In
lock-free mode nothing is locked.

Process workers are forked after the shared weight arrays are allocated,
so they write straight into the parent's memory. Thread workers share
the arrays by construction.
"""

import logging
import multiprocessing
import threading
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Any, ContextManager, List, Optional, Sequence

import numpy as np

from dep_tools.corpus.conll import Example
from dep_tools.decoder.eisner import tree_score
from dep_tools.decoder.parser import ScoreTables
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import SentenceEncoding, tree_feature_indices
from dep_tools.features.vector import FeatureVector
from dep_tools.model.weights import WeightModel
from dep_tools.trainer.config import Backend

logger = logging.getLogger(__name__)

# relative slack for pred_score >= gold_score
SCORE_TOLERANCE = 1e-9


@dataclass
class WorkerContext:
    """Everything a worker reads; built once per training run"""
    corpus: Sequence[Example]
    encodings: Sequence[SentenceEncoding]
    gold_features: Sequence[FeatureVector]
    model: WeightModel
    feature_config: FeatureConfig
    lock: Optional[Any] = None
    check_updates: bool = True

    def guard(self) -> ContextManager[Any]:
        return self.lock if self.lock is not None else nullcontext()


@dataclass
class ChunkResult:
    worker_id: int
    examples: int = 0
    mistakes: int = 0
    mistaken: List[int] = field(default_factory=list)


def check_update_validity(
    tables: ScoreTables, pred_heads: Sequence[int], gold_heads: Sequence[int], where: str
) -> None:
    """The predicted tree must score at least as high as gold under the decoding tables"""
    pred_score = tree_score(tables.matrix, pred_heads, tables.siblings)
    gold_score = tree_score(tables.matrix, gold_heads, tables.siblings)
    slack = SCORE_TOLERANCE * max(1.0, abs(pred_score), abs(gold_score))
    if pred_score < gold_score - slack:
        raise ContractViolation(
            f"{where}: predicted tree scores {pred_score!r} below gold {gold_score!r}"
        )


def mistake_update(
    context: WorkerContext, index: int, tables: ScoreTables, pred_heads: Sequence[int]
) -> None:
    """Apply Phi(gold) - Phi(pred) for example ``index``"""
    encoding = context.encodings[index]
    pred_fv = FeatureVector.from_indices(
        tree_feature_indices(encoding, pred_heads, context.feature_config)
    )
    indices, deltas = context.gold_features[index].difference(pred_fv)
    with context.guard():
        context.model.apply_update(indices, deltas)


def run_chunk(context: WorkerContext, worker_id: int, indices: np.ndarray) -> ChunkResult:
    """Perceptron pass over one worker's share of an epoch"""
    result = ChunkResult(worker_id=worker_id)
    config = context.feature_config
    for index in indices:
        index = int(index)
        gold = context.corpus[index][1]
        with context.guard():
            tables = ScoreTables.build(context.encodings[index], context.model.weights, config)
        pred, _ = tables.decode()
        result.examples += 1
        if pred.heads == gold.heads:
            continue
        if context.check_updates:
            check_update_validity(tables, pred.heads, gold.heads, f"example {index}")
        mistake_update(context, index, tables, pred.heads)
        result.mistakes += 1
        result.mistaken.append(index)
    return result


# Process workers find their context here; it is inherited through fork.
_FORKED_CONTEXT: Optional[WorkerContext] = None


def _forked_entry(worker_id: int, indices: np.ndarray) -> ChunkResult:
    assert _FORKED_CONTEXT is not None, "process worker started without a training context"
    return run_chunk(_FORKED_CONTEXT, worker_id, indices)


def make_lock(backend: Backend) -> Any:
    if backend == Backend.PROCESS:
        return multiprocessing.get_context("fork").Lock()
    return threading.Lock()


def run_parallel_epoch(
    context: WorkerContext, chunks: List[np.ndarray], backend: Backend
) -> List[ChunkResult]:
    """
    Run one worker per chunk and wait for all of them (epoch barrier).

    Results are returned in worker order.
    """
    global _FORKED_CONTEXT
    executor: Executor
    if backend == Backend.PROCESS:
        _FORKED_CONTEXT = context
        executor = ProcessPoolExecutor(
            max_workers=len(chunks), mp_context=multiprocessing.get_context("fork")
        )
    else:
        executor = ThreadPoolExecutor(max_workers=len(chunks), thread_name_prefix="perceptron")

    results: List[Optional[ChunkResult]] = [None] * len(chunks)
    try:
        with executor:
            if backend == Backend.PROCESS:
                futures = {executor.submit(_forked_entry, worker_id, chunk): worker_id
                           for worker_id, chunk in enumerate(chunks)}
            else:
                futures = {executor.submit(run_chunk, context, worker_id, chunk): worker_id
                           for worker_id, chunk in enumerate(chunks)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
    finally:
        _FORKED_CONTEXT = None
    return [result for result in results if result is not None]
