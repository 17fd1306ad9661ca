"""Occupancy grid model following the map-server conventions."""
from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any

import numpy as np

from core.errors import (
    InvalidThresholds,
    MissingRequired,
    OutOfBounds,
    TypeMismatch,
    UnreadableFile,
)
from core.logging_utils import get_logger, log_with_context
from occupancy.pgm import Raster, read_pgm

logger = get_logger(__name__)

DEFAULT_FREE_THRESH = 0.196
DEFAULT_OCCUPIED_THRESH = 0.65


class Occupancy(IntEnum):
    """Cell states, using the occupancy-grid message values."""

    FREE = 0
    OCCUPIED = 100
    UNKNOWN = -1


@dataclass(frozen=True)
class MapMetadata:
    image_path: str
    resolution: float
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    occupied_thresh: float = DEFAULT_OCCUPIED_THRESH
    free_thresh: float = DEFAULT_FREE_THRESH
    negate: bool = False


@dataclass(frozen=True)
class GridMap:
    """Immutable occupancy raster.

    ``cells`` has shape ``(height_cells, width_cells)`` and is indexed
    ``cells[row, col]`` with row 0 at the lowest y of the map frame.
    """

    width_cells: int
    height_cells: int
    resolution: float
    origin: tuple[float, float, float]
    cells: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width_cells <= 0 or self.height_cells <= 0:
            raise ValueError("GridMap dimensions must be positive")
        if not self.resolution > 0:
            raise ValueError("GridMap resolution must be positive")
        if self.cells.shape != (self.height_cells, self.width_cells):
            raise ValueError(
                f"cells shape {self.cells.shape} does not match "
                f"{self.height_cells}x{self.width_cells}"
            )
        cells = np.array(self.cells, dtype=np.int16, copy=True)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_cells(
        cls,
        cells: np.ndarray,
        *,
        resolution: float = 1.0,
        origin: tuple[float, float, float] = (0.0, 0.0, 0.0),
    ) -> "GridMap":
        height, width = cells.shape
        return cls(
            width_cells=int(width),
            height_cells=int(height),
            resolution=float(resolution),
            origin=tuple(float(v) for v in origin),  # type: ignore[arg-type]
            cells=cells,
        )

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        col, row = cell
        return 0 <= col < self.width_cells and 0 <= row < self.height_cells

    def occupancy(self, cell: tuple[int, int]) -> Occupancy:
        if not self.in_bounds(cell):
            raise OutOfBounds(f"Cell {cell} outside {self.width_cells}x{self.height_cells} map")
        col, row = cell
        return Occupancy(int(self.cells[row, col]))

    def free_mask(self) -> np.ndarray:
        return self.cells == Occupancy.FREE

    def free_fraction(self) -> float:
        return float(np.count_nonzero(self.free_mask())) / self.cells.size

    def with_occupied_disc(self, center: tuple[int, int], radius: int) -> "GridMap":
        """Return a copy with every cell within ``radius`` of ``center`` occupied."""

        rows, cols = np.indices(self.cells.shape)
        col0, row0 = center
        disc = (cols - col0) ** 2 + (rows - row0) ** 2 <= radius * radius
        cells = np.array(self.cells, copy=True)
        cells[disc] = Occupancy.OCCUPIED
        return GridMap(
            width_cells=self.width_cells,
            height_cells=self.height_cells,
            resolution=self.resolution,
            origin=self.origin,
            cells=cells,
        )


def classify_gray(
    gray: np.ndarray, *, free_thresh: float, occupied_thresh: float, negate: bool
) -> np.ndarray:
    """Map 8-bit gray values to Occupancy codes (trinary map-server mode)."""

    if not (0.0 <= free_thresh < occupied_thresh <= 1.0):
        raise InvalidThresholds(
            f"Thresholds must satisfy 0 <= free ({free_thresh}) < occupied ({occupied_thresh}) <= 1",
            free_thresh=free_thresh,
            occupied_thresh=occupied_thresh,
        )
    gray = np.asarray(gray, dtype=np.float64)
    probability = gray / 255.0 if negate else (255.0 - gray) / 255.0
    codes = np.full(gray.shape, Occupancy.UNKNOWN, dtype=np.int16)
    codes[probability >= occupied_thresh] = Occupancy.OCCUPIED
    codes[probability <= free_thresh] = Occupancy.FREE
    return codes


def load_map(meta: MapMetadata, raster: Raster) -> GridMap:
    """Build a GridMap; raster row 0 (top) becomes the highest-y cell row."""

    if raster.width <= 0 or raster.height <= 0:
        raise ValueError("Raster dimensions must be positive")
    codes = classify_gray(
        raster.values,
        free_thresh=meta.free_thresh,
        occupied_thresh=meta.occupied_thresh,
        negate=meta.negate,
    )
    grid = GridMap(
        width_cells=raster.width,
        height_cells=raster.height,
        resolution=meta.resolution,
        origin=meta.origin,
        cells=codes[::-1],
    )
    log_with_context(
        logger,
        logging.INFO,
        "Loaded occupancy map",
        stage="MAP",
        width=grid.width_cells,
        height=grid.height_cells,
        resolution=grid.resolution,
        free_fraction=f"{grid.free_fraction():.3f}",
    )
    return grid


def is_free(grid: GridMap, cell: tuple[int, int]) -> bool:
    col, row = cell
    if not grid.in_bounds((col, row)):
        return False
    return int(grid.cells[row, col]) == Occupancy.FREE


def cell_to_world(grid: GridMap, cell: tuple[int, int]) -> tuple[float, float]:
    """Metric center of ``cell`` under the map origin pose."""

    col, row = cell
    ox, oy, theta = grid.origin
    lx = (col + 0.5) * grid.resolution
    ly = (row + 0.5) * grid.resolution
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    return (ox + cos_t * lx - sin_t * ly, oy + sin_t * lx + cos_t * ly)


def world_to_cell(grid: GridMap, point: tuple[float, float]) -> tuple[int, int]:
    """Floor-quantized inverse of ``cell_to_world``."""

    x, y = point
    ox, oy, theta = grid.origin
    dx, dy = x - ox, y - oy
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    lx = cos_t * dx + sin_t * dy
    ly = -sin_t * dx + cos_t * dy
    col = math.floor(lx / grid.resolution)
    row = math.floor(ly / grid.resolution)
    if not grid.in_bounds((col, row)):
        raise OutOfBounds(f"Point {point} falls outside the map", point=point)
    return col, row


def _number(raw: dict[str, Any], key: str, default: float | None = None) -> float:
    value = raw.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeMismatch(f"Map metadata field '{key}' must be a number", field=key)
    return float(value)


def parse_map_metadata(raw: dict[str, Any], *, base_dir: str = ".") -> MapMetadata:
    """Validate a map sidecar document (map-server YAML fields as JSON)."""

    missing = [key for key in ("image_path", "resolution") if key not in raw]
    if missing:
        raise MissingRequired(missing)

    for key, default in (
        ("free_thresh", DEFAULT_FREE_THRESH),
        ("occupied_thresh", DEFAULT_OCCUPIED_THRESH),
    ):
        if key not in raw:
            log_with_context(
                logger,
                logging.WARNING,
                "Map metadata field unspecified, using default",
                stage="MAP",
                field=key,
                default=default,
            )

    origin_raw = raw.get("origin", [0.0, 0.0, 0.0])
    if not isinstance(origin_raw, (list, tuple)) or len(origin_raw) != 3:
        raise TypeMismatch("Map metadata 'origin' must be [x, y, theta]", field="origin")
    origin = tuple(float(v) for v in origin_raw)

    image_path = str(raw["image_path"])
    if not os.path.isabs(image_path):
        image_path = os.path.join(base_dir, image_path)

    return MapMetadata(
        image_path=image_path,
        resolution=_number(raw, "resolution"),
        origin=origin,  # type: ignore[arg-type]
        occupied_thresh=_number(raw, "occupied_thresh", DEFAULT_OCCUPIED_THRESH),
        free_thresh=_number(raw, "free_thresh", DEFAULT_FREE_THRESH),
        negate=bool(raw.get("negate", False)),
    )


def load_map_files(metadata_path: str) -> GridMap:
    """Load the JSON sidecar and the PGM raster it points at."""

    try:
        with open(metadata_path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UnreadableFile(f"Cannot read map metadata {metadata_path}: {exc}", path=metadata_path) from exc
    if not isinstance(raw, dict):
        raise TypeMismatch("Map metadata must be a JSON object")

    meta = parse_map_metadata(raw, base_dir=os.path.dirname(os.path.abspath(metadata_path)))
    if not meta.resolution > 0:
        raise TypeMismatch("Map resolution must be positive", field="resolution")
    try:
        raster = read_pgm(meta.image_path)
    except OSError as exc:
        raise UnreadableFile(f"Cannot read map image {meta.image_path}: {exc}") from exc
    return load_map(meta, raster)
