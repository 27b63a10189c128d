"""
Unit tests for perceptron training
==================================
"""

import io
import json

import numpy as np
import pytest
from pydantic import ValidationError

from dep_tools.corpus.conll import parse_conll
from dep_tools.decoder import ScoreTables
from dep_tools.exceptions import ContractViolation, EmptyCorpusError, TrainingError
from dep_tools.model import STRIPES
from dep_tools.trainer import (
    FULL_DELAY,
    Backend,
    EpochRecord,
    StepRecord,
    TrainConfig,
    TrainMode,
    TraceWriter,
    TrainTrace,
    epoch_schedule,
    run_full_delay,
    train,
    train_full_delay,
)
from dep_tools.trainer.parallel import check_update_validity
from tests.conftest import conll_text


def _sequential(**overrides):
    settings = dict(epochs=500, threads=1, mode=TrainMode.SEQUENTIAL, seed=1,
                    stop_when_converged=True)
    settings.update(overrides)
    return TrainConfig(**settings)


class TestTrainConfig:
    """Validation of training settings"""

    def test_sequential_needs_one_worker(self):
        with pytest.raises(ValidationError):
            TrainConfig(mode=TrainMode.SEQUENTIAL, threads=2)

    def test_threads_range(self):
        with pytest.raises(ValidationError):
            TrainConfig(mode=TrainMode.LOCKFREE, threads=0)

    def test_k_is_thread_count(self):
        assert TrainConfig(mode=TrainMode.LOCKED, threads=4).k == 4


class TestEpochSchedule:
    """Per-epoch permutation and partition"""

    def test_partition_covers_every_example(self):
        config = TrainConfig(mode=TrainMode.LOCKFREE, threads=3, seed=5)
        chunks = epoch_schedule(10, 1, config)
        assert len(chunks) == 3
        assert sorted(np.concatenate(chunks).tolist()) == list(range(10))

    def test_deterministic_and_varies_by_epoch(self):
        config = TrainConfig(mode=TrainMode.LOCKFREE, threads=2, seed=5)
        first = np.concatenate(epoch_schedule(20, 1, config))
        again = np.concatenate(epoch_schedule(20, 1, config))
        second = np.concatenate(epoch_schedule(20, 2, config))
        assert np.array_equal(first, again)
        assert not np.array_equal(first, second)

    def test_no_shuffle_keeps_order(self):
        config = TrainConfig(threads=1, shuffle=False)
        assert epoch_schedule(5, 3, config)[0].tolist() == [0, 1, 2, 3, 4]


class TestPreconditions:
    """Corpus checks before training"""

    def test_empty_corpus(self, feature_config):
        with pytest.raises(EmptyCorpusError):
            train([], feature_config, _sequential())

    def test_order_mismatch(self, separable_corpus, feature_config):
        with pytest.raises(ContractViolation):
            train(separable_corpus, feature_config, _sequential(order=2))

    def test_non_projective_gold(self, feature_config):
        corpus = parse_conll(conll_text([
            [("a", "X", 3), ("b", "Y", 0), ("c", "Z", 2), ("d", "W", 1)],
        ]))
        with pytest.raises(ContractViolation):
            train(corpus, feature_config, _sequential())

    def test_multi_root_gold(self, feature_config):
        corpus = parse_conll(conll_text([[("a", "X", 0), ("b", "Y", 0)]]))
        with pytest.raises(ContractViolation):
            train(corpus, feature_config, _sequential())


class TestSequentialTraining:
    """Single-worker perceptron"""

    def test_converges_on_separable_corpus(self, separable_corpus, feature_config):
        model, trace = train(separable_corpus, feature_config, _sequential())
        assert trace.converged
        assert trace.final_mistakes == 0
        assert trace.total_updates == model.global_updates
        assert trace.time_steps == trace.total_updates

    def test_deterministic(self, separable_corpus, feature_config):
        first, _ = train(separable_corpus, feature_config, _sequential(epochs=3))
        second, _ = train(separable_corpus, feature_config, _sequential(epochs=3))
        assert np.array_equal(first.weights, second.weights)
        assert np.array_equal(first.averaged_weights(), second.averaged_weights())

    def test_second_order(self, separable_corpus, second_order_config):
        model, trace = train(separable_corpus, second_order_config, _sequential(epochs=5))
        assert len(trace.epochs) <= 5
        assert trace.total_updates > 0
        assert model.nonzero() > 0

    def test_epoch_callback(self, separable_corpus, feature_config):
        seen = []
        train(
            separable_corpus, feature_config, _sequential(epochs=3, stop_when_converged=False),
            epoch_callback=lambda record, model: seen.append(record.epoch),
        )
        assert seen == [1, 2, 3]


class TestParallelTraining:
    """Locked and lock-free workers"""

    @pytest.mark.parametrize("backend", [Backend.THREAD, Backend.PROCESS])
    def test_lockfree_single_worker_equals_sequential(self, separable_corpus, feature_config,
                                                       backend):
        sequential, seq_trace = train(separable_corpus, feature_config, _sequential(epochs=4))
        lockfree, free_trace = train(
            separable_corpus, feature_config,
            _sequential(epochs=4, mode=TrainMode.LOCKFREE, backend=backend),
        )
        assert np.array_equal(sequential.weights, lockfree.weights)
        assert [e.mistakes for e in seq_trace.epochs] == [e.mistakes for e in free_trace.epochs]

    @pytest.mark.parametrize("threads", [2, 4])
    @pytest.mark.parametrize("mode", [TrainMode.LOCKED, TrainMode.LOCKFREE])
    def test_threaded_workers_converge(self, separable_corpus, feature_config, mode, threads):
        config = TrainConfig(
            epochs=200, threads=threads, mode=mode, seed=1, backend=Backend.THREAD,
            stop_when_converged=True,
        )
        model, trace = train(separable_corpus, feature_config, config)
        assert trace.converged
        assert all(len(epoch.worker_updates) == threads for epoch in trace.epochs)
        assert trace.time_steps == -(-trace.total_updates // threads)
        assert len(model.stripe_locks) == STRIPES

    @pytest.mark.slow
    def test_process_workers_share_weights(self, separable_corpus, feature_config):
        config = TrainConfig(
            epochs=200, threads=2, mode=TrainMode.LOCKFREE, seed=1, backend=Backend.PROCESS,
            stop_when_converged=True,
        )
        model, trace = train(separable_corpus, feature_config, config)
        assert model.is_shared
        assert trace.converged
        # updates from both workers land in the parent's arrays
        assert model.global_updates > 0
        assert model.nonzero(averaged=False) > 0


class TestUpdateValidity:
    """pred_score >= gold_score under the decoding weights"""

    def test_violation_raises(self):
        matrix = np.zeros((3, 3))
        matrix[0, 1] = 5.0
        matrix[1, 2] = 5.0
        tables = ScoreTables(matrix)
        with pytest.raises(ContractViolation):
            check_update_validity(tables, (-1, 2, 0), (-1, 0, 1), "example 0")

    def test_equal_scores_pass(self):
        tables = ScoreTables(np.zeros((3, 3)))
        check_update_validity(tables, (-1, 2, 0), (-1, 0, 1), "example 0")


class TestFullDelay:
    """Deterministic simulation of k stale workers"""

    def test_single_worker_equals_sequential(self, separable_corpus, feature_config):
        model, trace = train(separable_corpus, feature_config, _sequential(shuffle=False))
        delayed, delayed_model = run_full_delay(separable_corpus, feature_config, 1)
        assert delayed.converged
        assert delayed.total_updates == trace.total_updates
        assert np.array_equal(delayed_model.weights, model.weights)

    def test_steps_hold_at_most_k(self, separable_corpus, feature_config):
        trace = train_full_delay(separable_corpus, feature_config, 4)
        assert trace.mode == FULL_DELAY
        assert trace.converged
        assert all(1 <= step.mistakes <= 4 for step in trace.steps)
        assert all(step.partial == (step.mistakes < 4) for step in trace.steps)
        assert trace.full_steps + trace.partial_steps == len(trace.steps)
        assert trace.steps[-1].cumulative_updates == trace.total_updates

    def test_converged_start_takes_no_steps(self, separable_corpus, feature_config):
        model, trace = train(separable_corpus, feature_config, _sequential())
        assert trace.converged
        delayed = train_full_delay(
            separable_corpus, feature_config, 3, initial_weights=model.raw_weights()
        )
        assert delayed.steps == []
        assert delayed.converged

    def test_step_cap(self, separable_corpus, feature_config):
        trace = train_full_delay(separable_corpus, feature_config, 2, max_steps=1)
        assert len(trace.steps) == 1

    def test_invalid_k(self, separable_corpus, feature_config):
        with pytest.raises(ContractViolation):
            train_full_delay(separable_corpus, feature_config, 0)


class TestTrace:
    """Trace counters and JSON-lines output"""

    def test_time_step_accounting(self):
        trace = TrainTrace(mode="lockfree", k=4)
        trace.epochs.append(EpochRecord(1, "lockfree", 4, 10, 0.5, 10, 10, [3, 3, 2, 2]))
        assert trace.time_steps == 3
        assert trace.full_steps == 2
        assert trace.partial_steps == 1
        assert trace.step_sizes == [4, 4, 2]

    def test_full_delay_accounting(self):
        trace = TrainTrace(mode=FULL_DELAY, k=3)
        trace.steps += [StepRecord(1, 3, 3, False, 3), StepRecord(2, 3, 1, True, 4)]
        assert trace.time_steps == 2
        assert trace.full_steps == 1
        assert trace.step_sizes == [3, 1]
        assert trace.total_updates == 4

    def test_writer_emits_json_lines(self, separable_corpus, feature_config):
        stream = io.StringIO()
        writer = TraceWriter(stream)
        _, trace = train(separable_corpus, feature_config, _sequential(epochs=2), writer)
        records = [json.loads(line) for line in stream.getvalue().splitlines()]
        assert [r['event'] for r in records] == ['epoch'] * len(trace.epochs) + ['summary']
        assert records[0]['epoch'] == 1
        assert records[-1]['total_updates'] == trace.total_updates


class TestWorkerFailure:
    """Worker start failures surface as TrainingError"""

    def test_partial_trace_is_attached(self, separable_corpus, feature_config, mocker):
        mocker.patch(
            "dep_tools.trainer.engine._run_epoch", side_effect=OSError("cannot fork")
        )
        with pytest.raises(TrainingError) as excinfo:
            train(separable_corpus, feature_config, _sequential(epochs=2))
        assert excinfo.value.trace is not None
        assert excinfo.value.trace.epochs == []
