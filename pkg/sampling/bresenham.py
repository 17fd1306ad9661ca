"""Integer raster primitives used by the footprint collision check."""
from __future__ import annotations

Cell = tuple[int, int]


def bresenham_line(p0: Cell, p1: Cell) -> list[Cell]:
    """Cells of the segment p0 -> p1, 8-connected, both endpoints included.

    Ties are always resolved walking from the lexicographically smaller
    endpoint, so ``line(a, b)`` and ``line(b, a)`` cover the same cells.
    """

    if p1 < p0:
        return list(reversed(bresenham_line(p1, p0)))

    x0, y0 = p0
    x1, y1 = p1
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy

    cells: list[Cell] = []
    x, y = x0, y0
    while True:
        cells.append((x, y))
        if x == x1 and y == y1:
            return cells
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def _octant_points(r: int) -> list[Cell]:
    # First octant (x >= y >= 0); at each y keep the x minimizing |x^2 + y^2 - r^2|.
    points: list[Cell] = []
    x, y = r, 0
    r2 = r * r
    while x >= y:
        points.append((x, y))
        y += 1
        residual = abs(x * x + y * y - r2)
        residual_inner = abs((x - 1) * (x - 1) + y * y - r2)
        if x > 0 and residual_inner < residual:
            x -= 1
    return points


def bresenham_circle(center: Cell, r: int) -> set[Cell]:
    """Perimeter cells of the radius-``r`` circle around ``center``."""

    if r < 0:
        raise ValueError("circle radius must be non-negative")
    cx, cy = center
    cells: set[Cell] = set()
    for x, y in _octant_points(r):
        for dx, dy in (
            (x, y),
            (y, x),
            (-y, x),
            (-x, y),
            (-x, -y),
            (-y, -x),
            (y, -x),
            (x, -y),
        ):
            cells.add((cx + dx, cy + dy))
    return cells
