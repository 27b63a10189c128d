"""
Training configuration.
"""

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dep_tools import config as env_config


class TrainMode(str, Enum):
    """How workers share the weight vector"""
    SEQUENTIAL = "sequential"
    LOCKED = "locked"
    LOCKFREE = "lockfree"


class Backend(str, Enum):
    """Where parallel workers run"""
    PROCESS = "process"
    THREAD = "thread"


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    epochs: int = Field(default_factory=lambda: env_config.EPOCHS, ge=1)
    threads: int = Field(default=1, ge=1, le=256)
    mode: TrainMode = TrainMode.SEQUENTIAL
    seed: int = Field(default_factory=lambda: env_config.SEED, ge=0, lt=2**64)
    # must match the feature configuration when given
    order: Optional[Literal[1, 2]] = None
    shuffle: bool = True
    backend: Backend = Field(default_factory=lambda: Backend(env_config.BACKEND))
    stop_when_converged: bool = False
    check_updates: bool = True

    @model_validator(mode='after')
    def _sequential_is_single_worker(self) -> "TrainConfig":
        if self.mode == TrainMode.SEQUENTIAL and self.threads != 1:
            raise ValueError("sequential mode runs exactly one worker (threads=1)")
        return self

    @property
    def k(self) -> int:
        return self.threads
