import numpy as np
import pytest

from camera.projection import (
    CUBOID_EDGES,
    CameraModel,
    CuboidShape,
    PixelRect,
    cuboid_vertices,
    darknet_normalize,
    project_cuboid_to_rect,
    project_point,
    project_points,
)
from core.errors import BehindCamera
from timeline.transforms import Transform


@pytest.fixture()
def cam():
    return CameraModel(fx=200.0, fy=200.0, cx=160.0, cy=120.0, width=320, height=240)


def _at(x, y, z) -> Transform:
    return Transform((x, y, z), (0.0, 0.0, 0.0, 1.0))


def test_point_on_axis_hits_principal_point(cam):
    assert project_point(cam, (0.0, 0.0, 3.0)) == (160.0, 120.0)


def test_point_projection_matches_intrinsics_matrix(cam):
    point = np.array([0.4, -0.3, 2.5])
    homogeneous = cam.matrix @ point

    assert project_point(cam, point) == pytest.approx(tuple(homogeneous[:2] / homogeneous[2]))


def test_point_behind_camera(cam):
    with pytest.raises(BehindCamera):
        project_point(cam, (0.0, 0.0, -1.0))
    assert np.isnan(project_points(cam, np.array([[0.0, 0.0, 0.0]]))).all()


def test_cuboid_has_twelve_edges():
    assert len(CUBOID_EDGES) == 12
    vertices = cuboid_vertices(CuboidShape(size=(2.0, 4.0, 6.0)))
    assert vertices.min(axis=0) == pytest.approx([-1.0, -2.0, -3.0])
    assert vertices.max(axis=0) == pytest.approx([1.0, 2.0, 3.0])


def test_cuboid_offset_moves_vertices():
    shape = CuboidShape(size=(1.0, 1.0, 1.0), offset=_at(0.0, 0.0, 0.5))

    assert cuboid_vertices(shape)[:, 2].min() == pytest.approx(0.0)


def test_centered_quarter_size_box_gives_darknet_example(cam):
    # Front face at z = 5 spans 80 x 60 pixels around the principal point.
    shape = CuboidShape(size=(2.0, 1.5, 2.0))

    rect = project_cuboid_to_rect(cam, shape, _at(0.0, 0.0, 6.0))
    box = darknet_normalize(rect, 1, cam.width, cam.height)

    assert (rect.x_min, rect.y_min, rect.x_max, rect.y_max) == pytest.approx((120.0, 90.0, 200.0, 150.0))
    assert box.format_line() == "1 0.500000 0.500000 0.250000 0.250000"


def test_rect_contains_all_projected_vertices(cam):
    rng = np.random.default_rng(3)
    shape = CuboidShape(size=(0.5, 0.8, 0.3))
    for _ in range(50):
        pose = Transform(
            (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(3, 8)), rng.normal(size=4)
        )
        rect = project_cuboid_to_rect(cam, shape, pose)
        uv = project_points(cam, pose.apply(cuboid_vertices(shape)))
        u = np.clip(uv[:, 0], 0, cam.width)
        v = np.clip(uv[:, 1], 0, cam.height)
        assert rect.contains(u, v).all()
        assert u.min() == pytest.approx(rect.x_min) and u.max() == pytest.approx(rect.x_max)


def test_straddling_near_plane_is_clipped_and_clamped(cam):
    rect = project_cuboid_to_rect(cam, CuboidShape(size=(2.0, 2.0, 2.0)), _at(0.0, 0.0, 0.5))

    assert rect is not None
    assert (rect.x_min, rect.y_min, rect.x_max, rect.y_max) == (0.0, 0.0, 320.0, 240.0)


def test_fully_behind_camera_is_not_visible(cam):
    assert project_cuboid_to_rect(cam, CuboidShape(size=(1.0, 1.0, 1.0)), _at(0.0, 0.0, -3.0)) is None


def test_outside_field_of_view_is_not_visible(cam):
    assert project_cuboid_to_rect(cam, CuboidShape(size=(1.0, 1.0, 1.0)), _at(50.0, 0.0, 5.0)) is None


def test_darknet_fractions_stay_in_unit_range(cam):
    rect = project_cuboid_to_rect(cam, CuboidShape(size=(1.0, 1.0, 1.0)), _at(2.9, 2.0, 5.0))
    box = darknet_normalize(rect, 0, cam.width, cam.height)

    for value in (box.cx_frac, box.cy_frac, box.w_frac, box.h_frac):
        assert 0.0 <= value <= 1.0


def test_pixel_rect_contains_is_inclusive():
    rect = PixelRect(1.0, 1.0, 3.0, 2.0)

    assert rect.contains(np.array([1.0, 3.0, 3.5]), np.array([1.0, 2.0, 1.5])).tolist() == [True, True, False]


def test_camera_rejects_bad_intrinsics():
    with pytest.raises(ValueError):
        CameraModel(fx=0.0, fy=1.0, cx=0.0, cy=0.0, width=10, height=10)
