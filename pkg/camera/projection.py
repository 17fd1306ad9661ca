"""Pinhole projection and the geometric helpers shared by label writers.

Camera frame convention: +z forward, +x right, +y down. Pixel ``(col, row)``
covers ``[col, col + 1) x [row, row + 1)`` in continuous image coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from core.errors import BehindCamera
from timeline.transforms import Transform

DEFAULT_NEAR_PLANE = 0.01


@dataclass(frozen=True)
class CameraModel:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    pose: Transform = field(default_factory=Transform.identity)
    near_plane: float = DEFAULT_NEAR_PLANE

    def __post_init__(self) -> None:
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError("focal lengths must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be at least 1")
        if not self.near_plane > 0:
            raise ValueError("near_plane must be positive")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]])

    def with_pose(self, pose: Transform) -> "CameraModel":
        return CameraModel(
            fx=self.fx,
            fy=self.fy,
            cx=self.cx,
            cy=self.cy,
            width=self.width,
            height=self.height,
            pose=pose,
            near_plane=self.near_plane,
        )

    def world_to_camera(self) -> Transform:
        return self.pose.inverse()


@dataclass(frozen=True)
class CuboidShape:
    """Circumscribing box, axis-aligned in the object frame."""

    size: tuple[float, float, float]
    offset: Transform = field(default_factory=Transform.identity)

    def __post_init__(self) -> None:
        if len(self.size) != 3 or any(not dim > 0 for dim in self.size):
            raise ValueError("cuboid dimensions must be positive")


@dataclass(frozen=True)
class PixelRect:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return (u >= self.x_min) & (u <= self.x_max) & (v >= self.y_min) & (v <= self.y_max)


@dataclass(frozen=True)
class DarknetBox:
    class_id: int
    cx_frac: float
    cy_frac: float
    w_frac: float
    h_frac: float

    def format_line(self) -> str:
        return (
            f"{self.class_id} {self.cx_frac:.6f} {self.cy_frac:.6f} "
            f"{self.w_frac:.6f} {self.h_frac:.6f}"
        )


# Corner indices differing in exactly one coordinate sign.
_SIGNS = list(itertools.product((-1.0, 1.0), repeat=3))
CUBOID_EDGES = [
    (i, j)
    for i, j in itertools.combinations(range(8), 2)
    if sum(a != b for a, b in zip(_SIGNS[i], _SIGNS[j])) == 1
]


def cuboid_vertices(shape: CuboidShape) -> np.ndarray:
    """The 8 corners (+-L/2, +-W/2, +-H/2) in the object frame, shape (8, 3)."""

    half = np.asarray(shape.size, dtype=np.float64) / 2.0
    corners = np.asarray(_SIGNS) * half
    return shape.offset.apply(corners)


def transform_points(points: np.ndarray, transform: Transform) -> np.ndarray:
    return transform.apply(points)


def project_point(cam: CameraModel, p_cam: Sequence[float]) -> tuple[float, float]:
    x, y, z = (float(value) for value in p_cam)
    if z < cam.near_plane:
        raise BehindCamera(f"Point depth {z} is in front of the near plane {cam.near_plane}", z=z)
    return cam.fx * x / z + cam.cx, cam.fy * y / z + cam.cy


def project_points(cam: CameraModel, points_cam: np.ndarray) -> np.ndarray:
    """Vectorized projection; rows with z below the near plane become NaN."""

    points_cam = np.asarray(points_cam, dtype=np.float64).reshape(-1, 3)
    uv = np.full((len(points_cam), 2), np.nan)
    in_front = points_cam[:, 2] >= cam.near_plane
    z = points_cam[in_front, 2]
    uv[in_front, 0] = cam.fx * points_cam[in_front, 0] / z + cam.cx
    uv[in_front, 1] = cam.fy * points_cam[in_front, 1] / z + cam.cy
    return uv


def clip_cuboid_to_near_plane(vertices_cam: np.ndarray, near_plane: float) -> np.ndarray:
    """Surviving corners plus the points where cuboid edges cross z = near."""

    kept = [vertex for vertex in vertices_cam if vertex[2] >= near_plane]
    for i, j in CUBOID_EDGES:
        a, b = vertices_cam[i], vertices_cam[j]
        if (a[2] >= near_plane) != (b[2] >= near_plane):
            ratio = (near_plane - a[2]) / (b[2] - a[2])
            crossing = a + ratio * (b - a)
            crossing[2] = near_plane
            kept.append(crossing)
    return np.asarray(kept, dtype=np.float64).reshape(-1, 3)


def project_cuboid_to_rect(
    cam: CameraModel, shape: CuboidShape, object_pose_in_camera: Transform
) -> Optional[PixelRect]:
    """Circumscribing image rectangle of the cuboid, clamped to the image.

    Returns None when nothing of the cuboid is in front of the near plane or
    the rectangle misses the image entirely.
    """

    vertices_cam = transform_points(cuboid_vertices(shape), object_pose_in_camera)
    clipped = clip_cuboid_to_near_plane(vertices_cam, cam.near_plane)
    if len(clipped) == 0:
        return None

    uv = project_points(cam, clipped)
    x_min, y_min = uv.min(axis=0)
    x_max, y_max = uv.max(axis=0)
    if x_max <= 0 or y_max <= 0 or x_min >= cam.width or y_min >= cam.height:
        return None
    return PixelRect(
        x_min=float(max(x_min, 0.0)),
        y_min=float(max(y_min, 0.0)),
        x_max=float(min(x_max, cam.width)),
        y_max=float(min(y_max, cam.height)),
    )


def darknet_normalize(rect: PixelRect, class_id: int, width: int, height: int) -> DarknetBox:
    center_x = (rect.x_min + rect.x_max) / 2.0
    center_y = (rect.y_min + rect.y_max) / 2.0
    return DarknetBox(
        class_id=int(class_id),
        cx_frac=center_x / width,
        cy_frac=center_y / height,
        w_frac=rect.width / width,
        h_frac=rect.height / height,
    )
