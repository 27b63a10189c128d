"""
DEP-TOOLS Evaluation and Benchmarks
===================================

UAS, learning curves, speed-up grids and peak memory.
"""

from .accuracy import EvalResult, uas, corpus_uas, evaluate_parser, learning_curve
from .memory import PeakMemorySampler, tree_memory
from .bench import (
    BASELINE,
    BenchConfig,
    BenchResult,
    bench,
    speedup,
    format_speedup,
    results_table,
    results_frame,
    write_csv,
    write_records,
)

__all__ = [
    'EvalResult',
    'uas',
    'corpus_uas',
    'evaluate_parser',
    'learning_curve',
    'PeakMemorySampler',
    'tree_memory',
    'BASELINE',
    'BenchConfig',
    'BenchResult',
    'bench',
    'speedup',
    'format_speedup',
    'results_table',
    'results_frame',
    'write_csv',
    'write_records',
]
