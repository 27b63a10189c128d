"""
Training Speed Benchmark
========================

Times full training passes (decode + update) for a grid of modes and
worker counts. Every cell trains a fresh model for one pass, once as an
untimed warm-up and then ``repetitions`` more times; the median of those
independent first passes is the seconds per pass, so every repetition
does the same amount of update work. Speed-up is relative to the
sequential run, whose row is exactly 1.0. Peak memory covers all runs of
a cell including workers.
"""

import statistics
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import pandas as pd
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator
from rich.table import Table

from dep_tools.corpus.conll import Example
from dep_tools.decoder.parser import DependencyParser
from dep_tools.evalbench.accuracy import evaluate_parser
from dep_tools.evalbench.memory import PeakMemorySampler
from dep_tools.features.config import FeatureConfig
from dep_tools.trainer.config import Backend, TrainConfig, TrainMode
from dep_tools.trainer.engine import train
from dep_tools.utils.debug_logger import debug_log

BASELINE = (TrainMode.SEQUENTIAL, 1)


class BenchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    modes: Tuple[TrainMode, ...] = (TrainMode.LOCKED, TrainMode.LOCKFREE)
    threads: Tuple[int, ...] = (2, 4, 8)
    repetitions: int = Field(default=3, ge=1)
    seed: int = Field(default=1, ge=0)
    backend: Backend = Backend.PROCESS

    @field_validator('threads')
    @classmethod
    def _positive_threads(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value or min(value) < 1:
            raise ValueError("worker counts must be positive")
        return value

    def grid(self) -> List[Tuple[TrainMode, int]]:
        """Baseline first, then every parallel (mode, k) pair"""
        cells = [BASELINE]
        for mode in self.modes:
            if mode == TrainMode.SEQUENTIAL:
                continue
            cells.extend((mode, k) for k in self.threads)
        return cells


@dataclass
class BenchResult:
    mode: str
    k: int
    seconds_per_pass: float
    speedup: float
    peak_memory: int
    updates: int
    heldout_uas: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def speedup(baseline_seconds: float, seconds: float) -> float:
    return baseline_seconds / seconds


def _time_run(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    mode: TrainMode,
    k: int,
    config: BenchConfig,
    heldout: Optional[Sequence[Example]],
) -> Tuple[float, int, int, Optional[float]]:
    train_config = TrainConfig(
        epochs=1,
        threads=k,
        mode=mode,
        seed=config.seed,
        backend=config.backend,
    )
    timings = []
    with PeakMemorySampler() as sampler:
        train(corpus, feature_config, train_config)  # warm-up
        for _ in range(config.repetitions):
            model, trace = train(corpus, feature_config, train_config)
            timings.append(trace.epochs[0].seconds)
    seconds = statistics.median(timings)
    heldout_uas = None
    if heldout:
        parser = DependencyParser(model.averaged_weights(), feature_config)
        heldout_uas = evaluate_parser(parser, heldout).uas
    return seconds, sampler.peak, trace.total_updates, heldout_uas


def bench(
    corpus: Sequence[Example],
    feature_config: FeatureConfig,
    config: BenchConfig,
    heldout: Optional[Sequence[Example]] = None,
) -> List[BenchResult]:
    results: List[BenchResult] = []
    baseline_seconds = 0.0
    for mode, k in config.grid():
        seconds, peak, updates, heldout_uas = _time_run(
            corpus, feature_config, mode, k, config, heldout
        )
        if (mode, k) == BASELINE:
            baseline_seconds = seconds
            ratio = 1.0
        else:
            ratio = speedup(baseline_seconds, seconds)
        results.append(BenchResult(
            mode=mode.value,
            k=k,
            seconds_per_pass=seconds,
            speedup=ratio,
            peak_memory=peak,
            updates=updates,
            heldout_uas=heldout_uas,
        ))
        debug_log.bench(f"{mode.value} k={k}: {seconds:.3f}s/pass", "INFO", extra={
            'speedup': round(ratio, 3),
            'peak_memory_mb': round(peak / 2**20, 1),
        })
    return results


def results_table(results: Sequence[BenchResult]) -> Table:
    """Speed-up column formatted like "8.1x(55.4s)" """
    table = Table(title="Speed up and time per pass")
    table.add_column("Mode", style="cyan")
    table.add_column("k", justify="right")
    table.add_column("Speed up (time/pass)", justify="right")
    table.add_column("Peak memory", justify="right")
    table.add_column("Held-out UAS", justify="right")
    for result in results:
        table.add_row(
            result.mode,
            str(result.k),
            format_speedup(result.speedup, result.seconds_per_pass),
            f"{result.peak_memory / 2**20:.1f} MB",
            "-" if result.heldout_uas is None else f"{100 * result.heldout_uas:.2f}",
        )
    return table


def format_speedup(ratio: float, seconds: float) -> str:
    return f"{ratio:.1f}x({seconds:.1f}s)"


def results_frame(results: Sequence[BenchResult]) -> pd.DataFrame:
    return pd.DataFrame([result.to_dict() for result in results])


def write_csv(results: Sequence[BenchResult], path: Union[str, Path]) -> None:
    results_frame(results).to_csv(path, index=False)


def write_records(results: Sequence[BenchResult], stream: TextIO) -> None:
    """One JSON record per benchmark row"""
    log = structlog.wrap_logger(
        structlog.PrintLogger(stream),
        processors=[structlog.processors.JSONRenderer(sort_keys=True)],
        wrapper_class=structlog.BoundLogger,
    )
    for result in results:
        log.info("bench", **result.to_dict())
