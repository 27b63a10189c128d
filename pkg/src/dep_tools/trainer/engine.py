"""
Perceptron Training
===================

``train`` runs the structured perceptron in one of three modes:

- sequential: one worker, inline in the calling process
- locked: k workers, score reads and updates serialised by one lock
- lockfree: k workers, no lock around decoding or a whole update; only single-coordinate
  additions are guarded by stripe locks

Each epoch visits every example once. The examples are permuted with a
generator seeded by (seed, epoch) and the permutation is cut into k
contiguous chunks, one per worker. Workers are joined at the end of every
epoch. The returned model still holds the raw weights; call
``averaged_weights()`` for the averaged parameters.
"""

import logging
import time
from concurrent.futures import BrokenExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from dep_tools.corpus.conll import Example
from dep_tools.corpus.tree import is_projective
from dep_tools.exceptions import ContractViolation, EmptyCorpusError, TrainingError
from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import encode_sentence, tree_feature_indices
from dep_tools.features.vector import FeatureVector
from dep_tools.model.weights import WeightModel, thread_stripe_locks
from dep_tools.trainer.config import Backend, TrainConfig, TrainMode
from dep_tools.trainer.parallel import (
    ChunkResult,
    WorkerContext,
    make_lock,
    run_chunk,
    run_parallel_epoch,
)
from dep_tools.trainer.trace import EpochRecord, TraceWriter, TrainTrace
from dep_tools.utils.debug_logger import debug_log

logger = logging.getLogger(__name__)

EpochCallback = Callable[[EpochRecord, WeightModel], None]


def check_corpus(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    train_config: Optional[TrainConfig] = None,
) -> None:
    """Training preconditions shared by every mode"""
    if not corpus:
        raise EmptyCorpusError("training corpus is empty")
    order = train_config.order if train_config is not None else None
    if order is not None and order != feature_config.order:
        raise ContractViolation(
            f"train order {order} disagrees with feature order {feature_config.order}"
        )
    for position, (sentence, tree) in enumerate(corpus):
        if len(sentence) != len(tree):
            raise ContractViolation(f"example {position}: sentence and tree lengths differ")
        if len(tree.root_children) != 1 or not is_projective(tree):
            raise ContractViolation(
                f"example {position}: gold tree is not a single-rooted projective tree"
            )


def epoch_schedule(n_examples: int, epoch: int, config: TrainConfig) -> List[np.ndarray]:
    """Per-worker example indices for one epoch"""
    if config.shuffle:
        order = np.random.default_rng([config.seed, epoch]).permutation(n_examples)
    else:
        order = np.arange(n_examples)
    return np.array_split(order, config.threads)


def build_context(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    model: WeightModel,
    lock: Optional[Any] = None,
    check_updates: bool = True,
) -> WorkerContext:
    """Encode every sentence and cache its gold feature vector"""
    encodings = [encode_sentence(sentence) for sentence, _ in corpus]
    gold_features = [
        FeatureVector.from_indices(tree_feature_indices(encoding, tree.heads, feature_config))
        for encoding, (_, tree) in zip(encodings, corpus)
    ]
    return WorkerContext(
        corpus=corpus,
        encodings=encodings,
        gold_features=gold_features,
        model=model,
        feature_config=feature_config,
        lock=lock,
        check_updates=check_updates,
    )


def _new_model(feature_config: FeatureConfig, config: TrainConfig) -> WeightModel:
    if config.mode != TrainMode.SEQUENTIAL and config.backend == Backend.PROCESS:
        return WeightModel.shared(feature_config)
    model = WeightModel.zeros(feature_config)
    if config.mode != TrainMode.SEQUENTIAL:
        model.stripe_locks = thread_stripe_locks()
    return model


def _run_epoch(
    context: WorkerContext, chunks: List[np.ndarray], config: TrainConfig
) -> List[ChunkResult]:
    if config.mode == TrainMode.SEQUENTIAL:
        return [run_chunk(context, 0, chunks[0])]
    return run_parallel_epoch(context, chunks, config.backend)


def train(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    train_config: TrainConfig,
    trace_writer: Optional[TraceWriter] = None,
    epoch_callback: Optional[EpochCallback] = None,
) -> Tuple[WeightModel, TrainTrace]:
    """
    Train a perceptron over ``corpus``.

    Raises:
        EmptyCorpusError: no examples
        ContractViolation: gold outside GEN(x), order mismatch, or a failed
            update-validity check
        TrainingError: workers could not be started or died; carries the
            trace recorded so far
    """
    check_corpus(corpus, feature_config, train_config)
    mode = train_config.mode
    model = _new_model(feature_config, train_config)
    lock = make_lock(train_config.backend) if mode == TrainMode.LOCKED else None
    context = build_context(corpus, feature_config, model, lock, train_config.check_updates)
    trace = TrainTrace(mode=mode.value, k=train_config.threads)

    debug_log.trainer(f"Training {mode.value} with k={train_config.threads}", "INFO", extra={
        'examples': len(corpus),
        'epochs': train_config.epochs,
        'order': feature_config.order,
        'backend': train_config.backend.value,
        'hash_bits': feature_config.hash_bits,
    })

    cumulative = 0
    for epoch in range(1, train_config.epochs + 1):
        chunks = epoch_schedule(len(corpus), epoch, train_config)
        started = time.perf_counter()
        try:
            results = _run_epoch(context, chunks, train_config)
        except (BrokenExecutor, OSError, RuntimeError) as e:
            trace.model_updates = model.global_updates
            raise TrainingError(f"epoch {epoch}: workers failed: {e}", trace) from e
        seconds = time.perf_counter() - started

        mistakes = sum(result.mistakes for result in results)
        cumulative += mistakes
        record = EpochRecord(
            epoch=epoch,
            mode=mode.value,
            k=train_config.threads,
            mistakes=mistakes,
            seconds=seconds,
            updates=mistakes,
            cumulative_updates=cumulative,
            worker_updates=[result.mistakes for result in results],
        )
        trace.epochs.append(record)
        if trace_writer is not None:
            trace_writer.epoch(record)
        debug_log.trainer(f"Epoch {epoch}: {mistakes} mistakes", extra={
            'seconds': round(seconds, 3),
            'cumulative_updates': cumulative,
        })
        if epoch_callback is not None:
            epoch_callback(record, model)

        if mistakes == 0:
            trace.converged = True
            if train_config.stop_when_converged:
                break

    trace.model_updates = model.global_updates
    if trace_writer is not None:
        trace_writer.summary(trace)
    debug_log.trainer("Training finished", "INFO", extra={
        'total_updates': trace.total_updates,
        'converged': trace.converged,
        'seconds': round(trace.total_seconds, 3),
    })
    return model, trace
