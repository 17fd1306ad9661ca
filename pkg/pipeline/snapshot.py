"""Scene capture for one frame and conversion into writer inputs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from camera.projection import (
    CameraModel,
    cuboid_vertices,
    darknet_normalize,
    project_cuboid_to_rect,
    project_points,
    transform_points,
)
from config.run_config import ObjectSpec
from render.image_io import Frame, Mask
from render.rasterizer import RenderObject, RenderOptions, render_scene
from render.segmentation import SegmentationEngine, visibility_masks
from timeline.transforms import Transform
from writers.base import FrameLookup, LabelInputs, ObjectLabel


@dataclass
class SceneSnapshot:
    """Everything captured for one frame before any label is written."""

    time: float
    camera: CameraModel
    objects: list[RenderObject]
    frame: Frame = field(repr=False)
    masks: Optional[list[Mask]] = field(default=None, repr=False)
    visible_masks: Optional[list[Mask]] = field(default=None, repr=False)

    @property
    def segmented(self) -> bool:
        return self.masks is not None


def render_objects(specs: Sequence[ObjectSpec], poses: Sequence[Transform]) -> list[RenderObject]:
    return [
        RenderObject(shape=spec.cuboid, pose=pose, class_id=spec.class_id)
        for spec, pose in zip(specs, poses)
    ]


def capture_snapshot(
    specs: Sequence[ObjectSpec],
    poses: Sequence[Transform],
    cam: CameraModel,
    *,
    time: float,
    options: RenderOptions,
    engine: Optional[SegmentationEngine] = None,
    with_visibility: bool = False,
) -> SceneSnapshot:
    """Render the frame and, when an engine is given, the isolated masks."""

    objects = render_objects(specs, poses)
    frame = render_scene(objects, cam, options)
    masks = engine.masks(objects, cam, options) if engine is not None else None
    visible = visibility_masks(objects, cam, workers=options.workers) if with_visibility else None
    return SceneSnapshot(
        time=time, camera=cam, objects=objects, frame=frame, masks=masks, visible_masks=visible
    )


def _label_for(
    spec: ObjectSpec, obj: RenderObject, cam: CameraModel, index: int, snapshot: SceneSnapshot
) -> ObjectLabel:
    pose_in_camera = cam.world_to_camera().compose(obj.pose)
    rect = project_cuboid_to_rect(cam, spec.cuboid, pose_in_camera)
    vertices_object = cuboid_vertices(spec.cuboid)
    vertices_camera = transform_points(vertices_object, pose_in_camera)
    keypoints_camera = transform_points(spec.keypoints, pose_in_camera) if len(spec.keypoints) else np.zeros((0, 3))
    return ObjectLabel(
        name=spec.name,
        class_id=spec.class_id,
        class_name=spec.class_name or spec.name,
        pose_world=obj.pose,
        rect=rect,
        box=darknet_normalize(rect, spec.class_id, cam.width, cam.height) if rect is not None else None,
        vertices_object=vertices_object,
        vertices_camera=vertices_camera,
        vertices_pixels=project_points(cam, vertices_camera),
        keypoints_object=spec.keypoints,
        keypoints_pixels=project_points(cam, keypoints_camera),
        mask=snapshot.masks[index] if snapshot.masks is not None else None,
        visible_mask=snapshot.visible_masks[index] if snapshot.visible_masks is not None else None,
    )


def build_label_inputs(
    snapshot: SceneSnapshot,
    specs: Sequence[ObjectSpec],
    *,
    frame_index: int,
    image_path: str,
    frame_lookup: Optional[FrameLookup] = None,
) -> LabelInputs:
    cam = snapshot.camera
    labels = [
        _label_for(spec, obj, cam, index, snapshot)
        for index, (spec, obj) in enumerate(zip(specs, snapshot.objects))
    ]
    return LabelInputs(
        frame_index=frame_index,
        time=snapshot.time,
        image_path=image_path,
        image_width=cam.width,
        image_height=cam.height,
        camera=cam,
        objects=labels,
        segmentation=snapshot.segmented,
        frame_lookup=frame_lookup,
    )
