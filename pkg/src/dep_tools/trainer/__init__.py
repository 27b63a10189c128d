"""
DEP-TOOLS Trainer
=================

Sequential, locked and lock-free perceptron training, and the
full-delay simulation of k stale workers.
"""

from .config import TrainMode, Backend, TrainConfig
from .trace import FULL_DELAY, EpochRecord, StepRecord, TrainTrace, TraceWriter
from .engine import train, epoch_schedule, check_corpus, build_context
from .full_delay import DEFAULT_MAX_STEPS, run_full_delay, train_full_delay

__all__ = [
    'TrainMode',
    'Backend',
    'TrainConfig',
    'FULL_DELAY',
    'EpochRecord',
    'StepRecord',
    'TrainTrace',
    'TraceWriter',
    'train',
    'epoch_schedule',
    'check_corpus',
    'build_context',
    'DEFAULT_MAX_STEPS',
    'run_full_delay',
    'train_full_delay',
]
