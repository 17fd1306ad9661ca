"""Random collision-free placement of objects on an occupancy grid."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.errors import NoFreePose
from core.logging_utils import get_logger, log_with_context
from occupancy.grid_map import GridMap, Occupancy, cell_to_world, is_free
from sampling.bresenham import Cell, bresenham_circle, bresenham_line
from sampling.rng import SeededStream

logger = get_logger(__name__)

DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class Pose2D:
    x: float
    y: float
    theta: float


@dataclass(frozen=True)
class FootprintSpec:
    safety_radius: float

    def __post_init__(self) -> None:
        if not self.safety_radius > 0:
            raise ValueError("safety_radius must be positive")

    def radius_cells(self, resolution: float) -> int:
        return int(math.ceil(self.safety_radius / resolution))


@dataclass
class SamplerState:
    """Single-owner sampler state; every cell draw advances ``attempts``."""

    rng_seed: int = 0
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    attempts: int = 0
    stream: SeededStream = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        self.stream = SeededStream(self.rng_seed)


def _disc_is_free(grid: GridMap, center: Cell, radius: int) -> bool:
    col, row = center
    if col - radius < 0 or row - radius < 0:
        return False
    if col + radius >= grid.width_cells or row + radius >= grid.height_cells:
        return False
    window = grid.cells[row - radius : row + radius + 1, col - radius : col + radius + 1]
    offsets = np.arange(-radius, radius + 1)
    disc = offsets[:, None] ** 2 + offsets[None, :] ** 2 <= radius * radius
    return bool(np.all(window[disc] == Occupancy.FREE))


def footprint_is_free(grid: GridMap, center: Cell, radius: int) -> bool:
    """Perimeter and radial-line check, then the filled-disc check.

    Bresenham perimeter cells lying beyond the Euclidean radius are skipped so
    the accepted footprint is exactly the filled disc of ``radius`` cells.
    """

    if radius < 0:
        raise ValueError("radius must be non-negative")
    if not is_free(grid, center):
        return False

    cx, cy = center
    limit = radius * radius
    for perimeter_cell in sorted(bresenham_circle(center, radius)):
        for cell in bresenham_line(center, perimeter_cell):
            if (cell[0] - cx) ** 2 + (cell[1] - cy) ** 2 > limit:
                continue
            if not is_free(grid, cell):
                return False

    return _disc_is_free(grid, center, radius)


def sample_pose(grid: GridMap, footprint: FootprintSpec, state: SamplerState) -> Pose2D:
    """Draw cells uniformly until one passes the footprint check.

    Each draw consumes one attempt; after ``max_attempts`` rejections the
    call raises NoFreePose.
    """

    radius = footprint.radius_cells(grid.resolution)
    stream = state.stream
    for _ in range(state.max_attempts):
        state.attempts += 1
        cell = (stream.below(grid.width_cells), stream.below(grid.height_cells))
        if not footprint_is_free(grid, cell, radius):
            continue
        theta = stream.angle()
        x, y = cell_to_world(grid, cell)
        log_with_context(
            logger,
            logging.DEBUG,
            "Sampled pose",
            stage="SAMPLER",
            col=cell[0],
            row=cell[1],
            theta=f"{theta:.4f}",
            attempts=state.attempts,
        )
        return Pose2D(x=x, y=y, theta=theta)

    raise NoFreePose(
        f"No free pose found after {state.max_attempts} attempts",
        max_attempts=state.max_attempts,
        radius_cells=radius,
    )
