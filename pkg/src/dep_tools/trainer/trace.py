"""
Training Trace
==============

Per-epoch (or, for full-delay simulation, per-step) counters of a
training run, and the writer that streams them as one JSON object per
line through structlog.
"""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

import structlog

FULL_DELAY = "full_delay"


@dataclass
class EpochRecord:
    epoch: int
    mode: str
    k: int
    mistakes: int
    seconds: float
    updates: int
    cumulative_updates: int
    worker_updates: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class StepRecord:
    """One full-delay time step: m updates computed against the same weights"""
    step: int
    k: int
    mistakes: int
    partial: bool
    cumulative_updates: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class TrainTrace:
    mode: str
    k: int
    epochs: List[EpochRecord] = field(default_factory=list)
    steps: List[StepRecord] = field(default_factory=list)
    converged: bool = False
    # updates counted by the model itself; can trail total_updates under lock-free races
    model_updates: int = 0

    @property
    def total_updates(self) -> int:
        if self.mode == FULL_DELAY:
            return sum(step.mistakes for step in self.steps)
        return sum(epoch.updates for epoch in self.epochs)

    @property
    def total_mistakes(self) -> int:
        return self.total_updates

    @property
    def total_seconds(self) -> float:
        return sum(epoch.seconds for epoch in self.epochs)

    @property
    def time_steps(self) -> int:
        """Rounds of k parallel updates"""
        if self.mode == FULL_DELAY:
            return len(self.steps)
        return math.ceil(self.total_updates / self.k)

    @property
    def full_steps(self) -> int:
        if self.mode == FULL_DELAY:
            return sum(1 for step in self.steps if not step.partial)
        return self.total_updates // self.k

    @property
    def partial_steps(self) -> int:
        return self.time_steps - self.full_steps

    @property
    def step_sizes(self) -> List[int]:
        """Updates per time step"""
        if self.mode == FULL_DELAY:
            return [step.mistakes for step in self.steps]
        sizes = [self.k] * self.full_steps
        if self.total_updates % self.k:
            sizes.append(self.total_updates % self.k)
        return sizes

    @property
    def final_mistakes(self) -> Optional[int]:
        return self.epochs[-1].mistakes if self.epochs else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'k': self.k,
            'converged': self.converged,
            'total_updates': self.total_updates,
            'model_updates': self.model_updates,
            'time_steps': self.time_steps,
            'full_steps': self.full_steps,
            'partial_steps': self.partial_steps,
            'epochs': [epoch.to_dict() for epoch in self.epochs],
            'steps': [step.to_dict() for step in self.steps],
        }


class TraceWriter:
    """Line-delimited JSON trace log"""

    def __init__(self, stream: TextIO, owns_stream: bool = False):
        self._stream = stream
        self._owns_stream = owns_stream
        self._log = structlog.wrap_logger(
            structlog.PrintLogger(stream),
            processors=[structlog.processors.JSONRenderer(sort_keys=True)],
            wrapper_class=structlog.BoundLogger,
        )

    @classmethod
    def open(cls, path: Union[str, Path]) -> "TraceWriter":
        return cls(open(path, "w", encoding="utf-8"), owns_stream=True)

    def epoch(self, record: EpochRecord) -> None:
        self._log.info("epoch", **record.to_dict())

    def step(self, record: StepRecord) -> None:
        self._log.info("step", **record.to_dict())

    def summary(self, trace: TrainTrace) -> None:
        self._log.info(
            "summary",
            mode=trace.mode,
            k=trace.k,
            converged=trace.converged,
            total_updates=trace.total_updates,
            time_steps=trace.time_steps,
        )

    def close(self) -> None:
        if self._owns_stream:
            self._stream.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()
