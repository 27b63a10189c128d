"""
Feature configuration.
"""

from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

# exact 1-4, then 5, 6-10, 11+
DEFAULT_DISTANCE_BUCKETS: Tuple[int, ...] = (1, 2, 3, 4, 5, 10)


class FeatureConfig(BaseModel):
    """Hash table size, model order and distance bucketing"""
    model_config = ConfigDict(frozen=True)

    hash_bits: int = Field(default=22, ge=16, le=30)
    order: Literal[1, 2] = 1
    distance_buckets: Tuple[int, ...] = DEFAULT_DISTANCE_BUCKETS

    @field_validator('distance_buckets')
    @classmethod
    def _check_buckets(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("at least one distance threshold is required")
        if len(value) > 255:
            raise ValueError("at most 255 distance thresholds are supported")
        if value[0] < 1 or any(later <= earlier for earlier, later in zip(value, value[1:])):
            raise ValueError(f"distance thresholds must be positive and increasing: {value}")
        if value[-1] > 0xFFFF:
            raise ValueError("distance thresholds must fit in 16 bits")
        return value

    @property
    def table_size(self) -> int:
        return 1 << self.hash_bits

    def bucket(self, distance: int) -> int:
        """Index of the first threshold >= distance; len(thresholds) past the last one"""
        return int(np.searchsorted(np.asarray(self.distance_buckets), distance, side='left'))

    def buckets(self, distances: np.ndarray) -> np.ndarray:
        return np.searchsorted(np.asarray(self.distance_buckets), distances, side='left')
