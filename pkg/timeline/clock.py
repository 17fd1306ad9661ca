"""Fixed frame-rate stepping over a replay window."""
from __future__ import annotations

import math
from dataclasses import dataclass

# Absorbs representation error in (end - start) * frame_rate, e.g. 0.3 * 10.
_COUNT_EPSILON = 1e-9


@dataclass(frozen=True)
class ReplayClock:
    start_time: float
    end_time: float
    frame_rate: float

    def __post_init__(self) -> None:
        if not self.frame_rate > 0:
            raise ValueError("frame_rate must be positive")
        if self.start_time > self.end_time:
            raise ValueError("start_time must not exceed end_time")

    def frame_count(self) -> int:
        span = (self.end_time - self.start_time) * self.frame_rate
        return int(math.floor(span + _COUNT_EPSILON)) + 1


def sample_times(clock: ReplayClock) -> list[float]:
    """Times start + k/f for k = 0..count-1, never past ``end_time``."""

    return [
        min(clock.start_time + index / clock.frame_rate, clock.end_time)
        for index in range(clock.frame_count())
    ]
