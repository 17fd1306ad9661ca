"""Single-Gaussian per-pixel background model on luminance."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import DimensionMismatch
from render.image_io import Frame, Mask

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class SubtractorParams:
    """Foreground iff (lum - mean)^2 > k * variance + tau."""

    k: float = 9.0
    tau: float = 225.0


@dataclass(frozen=True)
class BackgroundModel:
    mean: np.ndarray
    variance: np.ndarray
    trained_frames: int

    @property
    def width(self) -> int:
        return int(self.mean.shape[1])

    @property
    def height(self) -> int:
        return int(self.mean.shape[0])


def luminance(frame: Frame) -> np.ndarray:
    return frame.rgb.astype(np.float64) @ LUMA_WEIGHTS


def train_background(frames: Sequence[Frame]) -> BackgroundModel:
    """Per-pixel luminance mean and population variance over ``frames``."""

    if not frames:
        raise ValueError("at least one background frame is required")
    first = frames[0]
    for frame in frames[1:]:
        if (frame.width, frame.height) != (first.width, first.height):
            raise DimensionMismatch(
                f"Background frame {frame.width}x{frame.height} differs from "
                f"{first.width}x{first.height}"
            )
    stack = np.stack([luminance(frame) for frame in frames])
    return BackgroundModel(
        mean=stack.mean(axis=0),
        variance=stack.var(axis=0),
        trained_frames=len(frames),
    )


def subtract(model: BackgroundModel, frame: Frame, params: SubtractorParams | None = None) -> Mask:
    params = params or SubtractorParams()
    if (frame.width, frame.height) != (model.width, model.height):
        raise DimensionMismatch(
            f"Frame {frame.width}x{frame.height} does not match background "
            f"{model.width}x{model.height}"
        )
    deviation = (luminance(frame) - model.mean) ** 2
    bits = deviation > params.k * model.variance + params.tau
    return Mask(width=frame.width, height=frame.height, bits=bits)
