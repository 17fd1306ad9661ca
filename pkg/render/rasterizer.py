"""Deterministic z-buffered software rasterizer for posed cuboids.

Each cuboid becomes 12 triangles which are clipped at the camera near plane,
projected with the pinhole model and filled at pixel centers using edge
functions. Depth is resolved per pixel on camera-frame z (interpolated as
1/z, exact for planar triangles). Equal depths keep the earlier object.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from camera.projection import CameraModel, CuboidShape, cuboid_vertices
from render.image_io import Frame
from timeline.transforms import Transform

CHECKER_SIZE = 16
CHECKER_GRAYS = (32, 64)
AMBIENT = 0.6
DIFFUSE = 0.4
# Direction the light travels, in the world frame (downwards and slightly oblique).
LIGHT_DIRECTION = np.array([0.3, 0.2, -1.0]) / np.linalg.norm([0.3, 0.2, -1.0])
CLASS_COLORS = (
    (255, 200, 80),
    (120, 230, 255),
    (255, 170, 255),
    (200, 255, 160),
    (255, 255, 140),
    (170, 210, 255),
)

# Corner index layout follows cuboid_vertices: index = 4*sx + 2*sy + sz with s in {0: -, 1: +}.
_FACES = (
    ((0, 1, 3, 2), (-1.0, 0.0, 0.0)),
    ((4, 6, 7, 5), (1.0, 0.0, 0.0)),
    ((0, 4, 5, 1), (0.0, -1.0, 0.0)),
    ((2, 3, 7, 6), (0.0, 1.0, 0.0)),
    ((0, 2, 6, 4), (0.0, 0.0, -1.0)),
    ((1, 5, 7, 3), (0.0, 0.0, 1.0)),
)


@dataclass(frozen=True)
class RenderObject:
    """A cuboid mesh posed in the world."""

    shape: CuboidShape
    pose: Transform
    class_id: int = 0
    visible: bool = True


@dataclass(frozen=True)
class RenderOptions:
    noise_sigma: float = 0.0
    seed: int = 0
    workers: int = 1


@dataclass
class RasterBuffers:
    depth: np.ndarray
    ids: np.ndarray
    colors: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class _Triangle:
    object_index: int
    vertices_cam: np.ndarray
    color: tuple[int, int, int]


def class_color(class_id: int) -> tuple[int, int, int]:
    return CLASS_COLORS[class_id % len(CLASS_COLORS)]


def checkerboard(width: int, height: int) -> np.ndarray:
    rows, cols = np.indices((height, width))
    parity = ((rows // CHECKER_SIZE) + (cols // CHECKER_SIZE)) % 2
    gray = np.where(parity == 0, CHECKER_GRAYS[0], CHECKER_GRAYS[1]).astype(np.uint8)
    return np.repeat(gray[:, :, None], 3, axis=2)


def _shade(base: tuple[int, int, int], normal_world: np.ndarray) -> tuple[int, int, int]:
    lambert = max(0.0, float(-np.dot(normal_world, LIGHT_DIRECTION)))
    intensity = AMBIENT + DIFFUSE * lambert
    return tuple(int(round(channel * intensity)) for channel in base)  # type: ignore[return-value]


def _clip_polygon(polygon: list[np.ndarray], near: float) -> list[np.ndarray]:
    """Sutherland-Hodgman against the half-space z >= near."""

    output: list[np.ndarray] = []
    count = len(polygon)
    for index in range(count):
        current = polygon[index]
        following = polygon[(index + 1) % count]
        current_in = current[2] >= near
        following_in = following[2] >= near
        if current_in:
            output.append(current)
        if current_in != following_in:
            ratio = (near - current[2]) / (following[2] - current[2])
            crossing = current + ratio * (following - current)
            crossing[2] = near
            output.append(crossing)
    return output


def _triangles(objects: Sequence[RenderObject], cam: CameraModel) -> list[_Triangle]:
    world_to_cam = cam.world_to_camera()
    triangles: list[_Triangle] = []
    for index, obj in enumerate(objects):
        if not obj.visible:
            continue
        corners_obj = cuboid_vertices(obj.shape)
        cam_from_obj = world_to_cam.compose(obj.pose)
        corners_cam = cam_from_obj.apply(corners_obj)
        world_rotation = obj.pose.compose(obj.shape.offset).rotation
        base = class_color(obj.class_id)
        for face, normal in _FACES:
            color = _shade(base, world_rotation.apply(np.asarray(normal)))
            polygon = _clip_polygon([corners_cam[i].copy() for i in face], cam.near_plane)
            for k in range(1, len(polygon) - 1):
                triangles.append(
                    _Triangle(
                        object_index=index,
                        vertices_cam=np.array([polygon[0], polygon[k], polygon[k + 1]]),
                        color=color,
                    )
                )
    return triangles


def _fill_band(
    triangles: list[_Triangle], cam: CameraModel, row_start: int, row_stop: int
) -> RasterBuffers:
    width = cam.width
    band_height = row_stop - row_start
    depth = np.full((band_height, width), np.inf)
    ids = np.full((band_height, width), -1, dtype=np.int32)
    colors = np.zeros((band_height, width, 3), dtype=np.uint8)

    for triangle in triangles:
        verts = triangle.vertices_cam
        z = verts[:, 2]
        u = cam.fx * verts[:, 0] / z + cam.cx
        v = cam.fy * verts[:, 1] / z + cam.cy

        area = (u[1] - u[0]) * (v[2] - v[0]) - (u[2] - u[0]) * (v[1] - v[0])
        if abs(area) < 1e-12:
            continue

        col_lo = max(int(np.floor(u.min() - 0.5)), 0)
        col_hi = min(int(np.ceil(u.max() - 0.5)), width - 1)
        row_lo = max(int(np.floor(v.min() - 0.5)), row_start)
        row_hi = min(int(np.ceil(v.max() - 0.5)), row_stop - 1)
        if col_lo > col_hi or row_lo > row_hi:
            continue

        px = np.arange(col_lo, col_hi + 1) + 0.5
        py = np.arange(row_lo, row_hi + 1) + 0.5
        gx, gy = np.meshgrid(px, py)

        w0 = ((u[2] - u[1]) * (gy - v[1]) - (v[2] - v[1]) * (gx - u[1])) / area
        w1 = ((u[0] - u[2]) * (gy - v[2]) - (v[0] - v[2]) * (gx - u[2])) / area
        w2 = 1.0 - w0 - w1
        inside = (w0 >= 0) & (w1 >= 0) & (w2 >= 0)
        if not inside.any():
            continue

        with np.errstate(divide="ignore", invalid="ignore"):
            pixel_depth = 1.0 / (w0 / z[0] + w1 / z[1] + w2 / z[2])
        rows = slice(row_lo - row_start, row_hi - row_start + 1)
        cols = slice(col_lo, col_hi + 1)
        closer = inside & (pixel_depth < depth[rows, cols])
        depth[rows, cols][closer] = pixel_depth[closer]
        ids[rows, cols][closer] = triangle.object_index
        colors[rows, cols][closer] = triangle.color

    return RasterBuffers(depth=depth, ids=ids, colors=colors)


def rasterize(objects: Sequence[RenderObject], cam: CameraModel, *, workers: int = 1) -> RasterBuffers:
    """Fill depth, object-index and color buffers; row bands may run in parallel."""

    triangles = _triangles(objects, cam)
    workers = max(1, min(workers, cam.height))
    if workers == 1:
        return _fill_band(triangles, cam, 0, cam.height)

    bounds = np.linspace(0, cam.height, workers + 1).astype(int)
    bands = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda band: _fill_band(triangles, cam, *band), bands))
    return RasterBuffers(
        depth=np.concatenate([result.depth for result in results], axis=0),
        ids=np.concatenate([result.ids for result in results], axis=0),
        colors=np.concatenate([result.colors for result in results], axis=0),
    )


def add_noise(rgb: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    if sigma <= 0:
        return rgb
    generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    noisy = rgb.astype(np.float64) + generator.normal(0.0, sigma, size=rgb.shape)
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)


def render_scene(
    objects: Sequence[RenderObject],
    cam: CameraModel,
    options: Optional[RenderOptions] = None,
) -> Frame:
    options = options or RenderOptions()
    buffers = rasterize(objects, cam, workers=options.workers)
    rgb = checkerboard(cam.width, cam.height)
    covered = buffers.ids >= 0
    rgb[covered] = buffers.colors[covered]
    rgb = add_noise(rgb, options.noise_sigma, options.seed)
    return Frame(width=cam.width, height=cam.height, rgb=rgb)


def render_id_buffer(
    objects: Sequence[RenderObject], cam: CameraModel, *, workers: int = 1
) -> np.ndarray:
    """Per-pixel index into ``objects`` of the nearest surface, -1 where empty."""

    return rasterize(objects, cam, workers=workers).ids
