"""
Unit tests for accuracy, benchmarks and memory sampling
=======================================================
"""

import importlib
import io
import json
import multiprocessing
import sys
from ctypes import c_uint8
from multiprocessing.sharedctypes import RawArray

import numpy as np
import pandas as pd
import psutil
import pytest
from pydantic import ValidationError

from dep_tools.corpus.tree import DependencyTree
from dep_tools.evalbench import (
    BASELINE,
    BenchConfig,
    EvalResult,
    PeakMemorySampler,
    bench,
    corpus_uas,
    format_speedup,
    learning_curve,
    results_frame,
    results_table,
    speedup,
    tree_memory,
    uas,
    write_csv,
    write_records,
)
from dep_tools.exceptions import ContractViolation
from dep_tools.trainer import Backend, TrainConfig, TrainMode

bench_module = importlib.import_module("dep_tools.evalbench.bench")


class TestAccuracy:
    """Unlabeled attachment score"""

    def test_uas_ignores_root(self):
        gold = DependencyTree.from_heads([2, 0, 2])
        pred = DependencyTree.from_heads([0, 1, 2])
        result = uas(pred, gold)
        assert result == EvalResult(correct_heads=1, total_tokens=3)
        assert result.uas == pytest.approx(1 / 3)

    def test_corpus_uas_is_token_weighted(self):
        golds = [DependencyTree.from_heads([0]), DependencyTree.from_heads([2, 0, 2])]
        preds = [DependencyTree.from_heads([0]), DependencyTree.from_heads([0, 1, 2])]
        result = corpus_uas(preds, golds)
        assert result.correct_heads == 2
        assert result.total_tokens == 4
        assert result.to_dict()['uas'] == pytest.approx(0.5)

    def test_length_mismatch(self):
        with pytest.raises(ContractViolation):
            uas(DependencyTree.from_heads([0]), DependencyTree.from_heads([0, 1]))
        with pytest.raises(ContractViolation):
            corpus_uas([], [DependencyTree.from_heads([0])])

    def test_learning_curve(self, separable_corpus, feature_config):
        config = TrainConfig(epochs=3, seed=1)
        curve = learning_curve(separable_corpus[:10], separable_corpus[10:], feature_config, config)
        assert [epoch for epoch, _ in curve] == [1, 2, 3]
        assert all(0.0 <= score <= 1.0 for _, score in curve)


class TestSpeedup:
    """Speed-up arithmetic and formatting"""

    def test_reference_row(self):
        assert speedup(449.0, 55.4) == pytest.approx(8.1, abs=0.05)
        assert format_speedup(speedup(449.0, 55.4), 55.4) == "8.1x(55.4s)"

    def test_baseline_is_one(self):
        assert speedup(12.5, 12.5) == 1.0
        assert format_speedup(1.0, 449.0) == "1.0x(449.0s)"


class TestBench:
    """Benchmark grid"""

    def test_grid_starts_with_baseline(self):
        config = BenchConfig(modes=(TrainMode.LOCKED, TrainMode.LOCKFREE), threads=(2, 4))
        assert config.grid() == [
            BASELINE,
            (TrainMode.LOCKED, 2),
            (TrainMode.LOCKED, 4),
            (TrainMode.LOCKFREE, 2),
            (TrainMode.LOCKFREE, 4),
        ]

    def test_invalid_threads(self):
        with pytest.raises(ValidationError):
            BenchConfig(threads=(0,))

    def test_tiny_run(self, separable_corpus, feature_config, tmp_path):
        config = BenchConfig(
            modes=(TrainMode.LOCKFREE,), threads=(2,), repetitions=1, backend=Backend.THREAD
        )
        results = bench(separable_corpus, feature_config, config, heldout=separable_corpus[:4])
        assert [(r.mode, r.k) for r in results] == [("sequential", 1), ("lockfree", 2)]
        assert results[0].speedup == 1.0
        assert all(r.seconds_per_pass > 0 for r in results)
        assert all(r.peak_memory > 0 for r in results)
        assert all(r.heldout_uas is not None for r in results)

        path = tmp_path / "bench.csv"
        write_csv(results, path)
        frame = pd.read_csv(path)
        assert list(frame['mode']) == ["sequential", "lockfree"]
        assert results_frame(results).shape[0] == 2

        stream = io.StringIO()
        write_records(results, stream)
        records = [json.loads(line) for line in stream.getvalue().splitlines()]
        assert [r['k'] for r in records] == [1, 2]

        table = results_table(results)
        assert table.row_count == 2

    def test_repetitions_train_fresh_models(self, separable_corpus, feature_config, mocker):
        spy = mocker.spy(bench_module, "train")
        config = BenchConfig(
            modes=(TrainMode.LOCKFREE,), threads=(2,), repetitions=3, backend=Backend.THREAD
        )
        results = bench(separable_corpus, feature_config, config)
        # one warm-up and three timed runs per cell
        assert spy.call_count == 8
        assert all(call.args[2].epochs == 1 for call in spy.call_args_list)
        assert results[0].updates > 0


class TestPeakMemorySampler:
    """psutil-based peak memory"""

    def test_peak_is_recorded(self):
        with PeakMemorySampler(interval=0.01) as sampler:
            block = bytearray(4 * 2**20)
        assert sampler.peak > len(block)


SHARED_BYTES = 64 * 2**20


def _touch_and_wait(block, ready, release) -> None:
    np.frombuffer(block, dtype=np.uint8).sum()
    ready.set()
    release.wait(60)


class TestTreeMemory:
    """Shared pages of forked children are counted once"""

    def test_counts_the_current_process(self):
        assert tree_memory(psutil.Process()) > 0

    @pytest.mark.skipif(
        not sys.platform.startswith("linux"), reason="proportional set size is reported on Linux"
    )
    def test_forked_children_do_not_multiply_shared_pages(self):
        context = multiprocessing.get_context("fork")
        block = RawArray(c_uint8, SHARED_BYTES)
        np.frombuffer(block, dtype=np.uint8)[:] = 1
        parent = psutil.Process()
        alone = tree_memory(parent)

        release = context.Event()
        readies = [context.Event() for _ in range(3)]
        children = [
            context.Process(target=_touch_and_wait, args=(block, ready, release))
            for ready in readies
        ]
        for child in children:
            child.start()
        try:
            assert all(ready.wait(60) for ready in readies)
            together = tree_memory(parent)
        finally:
            release.set()
            for child in children:
                child.join()
        assert together < alone + SHARED_BYTES
