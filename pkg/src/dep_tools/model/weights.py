"""
Weight Model
============

The parameter vector alpha of the perceptron, stored as a flat dense
array indexed by hashed feature ids, together with the lazy averaging
bookkeeping needed to return the averaged parameters at the end of
training.

Averaging follows the timestamp scheme of the averaged perceptron: for
every coordinate we remember the update counter at which it last changed
and the running sum of its past values, and only flush that sum when the
coordinate is touched again or when the average is read.

For parallel training the three arrays and the update counter can live
in shared ctypes memory (``WeightModel.shared``). Workers forked after the
model is created see the same buffers. There is no lock around an update
as a whole; each coordinate instead falls in one of ``STRIPES`` stripes
(``index % STRIPES``) and the stripe lock is held only while that slice
of the update is written, so no single-coordinate addition is lost.
"""

import logging
import multiprocessing
import threading
from ctypes import c_double, c_int64
from multiprocessing.sharedctypes import RawArray
from typing import Any, List, Optional, Sequence

import numpy as np

from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.features.vector import FeatureVector
from dep_tools.utils.debug_logger import debug_log

logger = logging.getLogger(__name__)

# lock stripes guarding single-coordinate additions
STRIPES = 64


def process_stripe_locks(count: int = STRIPES) -> List[Any]:
    """Locks inherited by workers forked after they are created"""
    context = multiprocessing.get_context("fork")
    return [context.Lock() for _ in range(count)]


def thread_stripe_locks(count: int = STRIPES) -> List[Any]:
    return [threading.Lock() for _ in range(count)]


class WeightModel:
    """alpha plus averaging state"""

    def __init__(
        self,
        config: FeatureConfig,
        weights: np.ndarray,
        accum: np.ndarray,
        last_touched: np.ndarray,
        counter: np.ndarray,
        is_shared: bool = False,
        stripe_locks: Optional[Sequence[Any]] = None,
    ):
        size = config.table_size
        if not (weights.shape == accum.shape == last_touched.shape == (size,)):
            raise ContractViolation(f"weight arrays must all have length {size}")
        if counter.shape != (1,):
            raise ContractViolation("update counter must be a single cell")
        self.config = config
        self.weights = weights
        self.accum = accum
        self.last_touched = last_touched
        self._counter = counter
        self.is_shared = is_shared
        self.stripe_locks: List[Any] = list(stripe_locks or [])

    @classmethod
    def zeros(cls, config: FeatureConfig) -> "WeightModel":
        """Process-private model with alpha = 0"""
        size = config.table_size
        return cls(
            config,
            np.zeros(size, dtype=np.float64),
            np.zeros(size, dtype=np.float64),
            np.zeros(size, dtype=np.int64),
            np.zeros(1, dtype=np.int64),
        )

    @classmethod
    def shared(cls, config: FeatureConfig) -> "WeightModel":
        """Model backed by lock-free shared memory, visible to forked workers"""
        size = config.table_size
        model = cls(
            config,
            np.frombuffer(RawArray(c_double, size), dtype=np.float64),
            np.frombuffer(RawArray(c_double, size), dtype=np.float64),
            np.frombuffer(RawArray(c_int64, size), dtype=np.int64),
            np.frombuffer(RawArray(c_int64, 1), dtype=np.int64),
            is_shared=True,
            stripe_locks=process_stripe_locks(),
        )
        debug_log.model("Allocated shared weight arrays", extra={
            'hash_bits': config.hash_bits,
            'megabytes': round(3 * size * 8 / 2**20, 1),
        })
        return model

    @classmethod
    def from_weights(cls, config: FeatureConfig, weights: np.ndarray) -> "WeightModel":
        """Start from given weights with fresh averaging state"""
        model = cls.zeros(config)
        model.weights[:] = weights
        return model

    @property
    def global_updates(self) -> int:
        return int(self._counter[0])

    def score_indices(self, indices: np.ndarray) -> float:
        """Sum of weights over raw (repeated) feature indices"""
        return float(self.weights[indices].sum())

    def score_features(self, fv: FeatureVector) -> float:
        """alpha . fv"""
        if len(fv) and int(fv.indices.max()) >= self.config.table_size:
            raise ContractViolation("feature index outside the weight table")
        return float(np.dot(fv.counts.astype(np.float64), self.weights[fv.indices]))

    def apply_update(self, indices: np.ndarray, deltas: np.ndarray) -> None:
        """
        weights[indices] += deltas with lazy averaging; one global update.

        With stripe locks attached, every coordinate is flushed and added
        while its stripe lock is held, so concurrent workers never lose a
        coordinate increment. The counter read and write are not atomic:
        concurrent updates can share a timestamp and the average is then
        approximate.
        """
        indices = np.asarray(indices, dtype=np.int64)
        deltas = np.asarray(deltas, dtype=np.float64)
        stamp = self._counter[0]
        if indices.size:
            if self.stripe_locks:
                self._striped_add(indices, deltas, stamp)
            else:
                self._add(indices, deltas, stamp)
        self._counter[0] = stamp + 1

    def _add(self, indices: np.ndarray, deltas: np.ndarray, stamp: int) -> None:
        current = self.weights[indices]
        self.accum[indices] += current * (stamp - self.last_touched[indices])
        self.last_touched[indices] = stamp
        np.add.at(self.weights, indices, deltas)

    def _striped_add(self, indices: np.ndarray, deltas: np.ndarray, stamp: int) -> None:
        stripes = indices % len(self.stripe_locks)
        for stripe in np.unique(stripes):
            member = stripes == stripe
            with self.stripe_locks[stripe]:
                self._add(indices[member], deltas[member], stamp)

    def perceptron_update(self, gold_fv: FeatureVector, pred_fv: FeatureVector) -> None:
        """alpha += Phi(gold) - Phi(pred)"""
        indices, deltas = gold_fv.difference(pred_fv)
        self.apply_update(indices, deltas)

    def averaged_weights(self) -> np.ndarray:
        """Average of alpha over all updates so far; never mutates the model"""
        total = self.global_updates
        if total == 0:
            return self.weights.copy()
        flushed = self.accum + self.weights * (total - self.last_touched)
        return flushed / total

    def raw_weights(self) -> np.ndarray:
        return self.weights.copy()

    def nonzero(self, averaged: bool = True) -> int:
        values = self.averaged_weights() if averaged else self.weights
        return int(np.count_nonzero(values))


def score_features(model: WeightModel, fv: FeatureVector) -> float:
    return model.score_features(fv)


def perceptron_update(model: WeightModel, gold_fv: FeatureVector, pred_fv: FeatureVector) -> None:
    model.perceptron_update(gold_fv, pred_fv)


def averaged_weights(model: WeightModel) -> np.ndarray:
    return model.averaged_weights()


def copy_model(model: WeightModel, shared: Optional[bool] = None) -> WeightModel:
    """Deep copy, optionally moving the arrays into or out of shared memory"""
    if shared is None:
        shared = model.is_shared
    target = WeightModel.shared(model.config) if shared else WeightModel.zeros(model.config)
    if not shared and model.stripe_locks:
        target.stripe_locks = thread_stripe_locks(len(model.stripe_locks))
    target.weights[:] = model.weights
    target.accum[:] = model.accum
    target.last_touched[:] = model.last_touched
    target._counter[0] = model._counter[0]
    return target
