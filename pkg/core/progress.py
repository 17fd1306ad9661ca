"""Percent-complete reporting for long generation loops."""
from __future__ import annotations

import logging
from typing import Callable, Optional

from core.logging_utils import get_logger, log_with_context

logger = get_logger(__name__)

ProgressCallback = Callable[[int], None]


def progress_bar(percent: float | None, length: int = 10) -> str:
    if percent is None:
        return f"[{'░' * length}]"
    clamped = max(0.0, min(100.0, percent))
    filled = min(length, max(0, int(round((clamped / 100.0) * length))))
    empty = max(0, length - filled)
    return f"[{'█' * filled}{'░' * empty}]"


class ProgressReporter:
    """Emit integer percentages in steps of at least ``step`` points.

    Emitted values are nondecreasing and the final call to ``finish`` always
    reports 100, including for runs with zero frames.
    """

    def __init__(
        self,
        total: int,
        *,
        step: int = 5,
        stage: str = "PIPELINE",
        callback: Optional[ProgressCallback] = None,
    ):
        self.total = max(0, total)
        self.step = max(1, step)
        self.stage = stage
        self.callback = callback
        self.emitted: list[int] = []

    def _emit(self, percent: int) -> None:
        self.emitted.append(percent)
        log_with_context(
            logger,
            logging.INFO,
            "Generation progress",
            stage=self.stage,
            percent=percent,
            bar=progress_bar(percent),
        )
        if self.callback is not None:
            try:
                self.callback(percent)
            except Exception:
                logger.exception("Progress callback failed")

    def update(self, completed: int) -> None:
        if self.total == 0:
            return
        percent = int(completed * 100 // self.total)
        last = self.emitted[-1] if self.emitted else None
        if percent >= 100:
            return
        if last is None or percent - last >= self.step:
            self._emit(percent)

    def finish(self) -> None:
        if not self.emitted or self.emitted[-1] != 100:
            self._emit(100)
