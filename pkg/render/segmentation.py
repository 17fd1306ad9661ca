"""Instance masks from isolated renders and background subtraction."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from camera.projection import CameraModel, PixelRect, project_cuboid_to_rect
from core.logging_utils import get_logger, log_with_context
from render.background import BackgroundModel, SubtractorParams, subtract, train_background
from render.image_io import Mask
from render.rasterizer import RenderObject, RenderOptions, render_id_buffer, render_scene
from sampling.rng import derive_seed
from timeline.transforms import Transform

logger = get_logger(__name__)

BACKGROUND_PURPOSE = 1
ISOLATION_PURPOSE = 2


def object_rect(cam: CameraModel, obj: RenderObject) -> Optional[PixelRect]:
    return project_cuboid_to_rect(cam, obj.shape, cam.world_to_camera().compose(obj.pose))


def filter_mask_with_bbox(mask: Mask, rect: Optional[PixelRect]) -> Mask:
    """Keep only bits whose pixel center lies inside ``rect`` (None keeps nothing)."""

    if rect is None:
        return Mask.empty(mask.width, mask.height)
    centers_u = np.arange(mask.width) + 0.5
    centers_v = np.arange(mask.height) + 0.5
    inside = rect.contains(centers_u[None, :], centers_v[:, None])
    return Mask(width=mask.width, height=mask.height, bits=mask.bits & inside)


def isolated_object_masks(
    objects: Sequence[RenderObject],
    cam: CameraModel,
    model: BackgroundModel,
    params: SubtractorParams,
    options: RenderOptions,
) -> list[Mask]:
    """Render each object alone, subtract the background, filter by its box.

    The others are hidden rather than moved, so each mask is the object's
    full (amodal) silhouette even where another object would occlude it.
    """

    masks: list[Mask] = []
    for index, obj in enumerate(objects):
        solo = [replace(other, visible=(position == index)) for position, other in enumerate(objects)]
        solo_options = replace(options, seed=derive_seed(options.seed, ISOLATION_PURPOSE, index))
        frame = render_scene(solo, cam, solo_options)
        raw = subtract(model, frame, params)
        masks.append(filter_mask_with_bbox(raw, object_rect(cam, obj)))
    return masks


def visibility_masks(objects: Sequence[RenderObject], cam: CameraModel, *, workers: int = 1) -> list[Mask]:
    """Visible-region masks from the id buffer; the nearer surface owns each pixel."""

    ids = render_id_buffer(objects, cam, workers=workers)
    return [
        Mask(width=cam.width, height=cam.height, bits=ids == index) for index in range(len(objects))
    ]


@dataclass
class SegmentationEngine:
    """Owns the background model for a run and counts subtractor usage.

    The model is retrained whenever the camera pose changes between frames.
    """

    params: SubtractorParams = field(default_factory=SubtractorParams)
    num_bg_frames: int = 10
    trainings: int = 0
    subtractions: int = 0
    _model: Optional[BackgroundModel] = field(default=None, repr=False)
    _model_pose: Optional[Transform] = field(default=None, repr=False)

    def background_for(
        self, objects: Sequence[RenderObject], cam: CameraModel, options: RenderOptions
    ) -> BackgroundModel:
        if (
            self._model is not None
            and self._model_pose is not None
            and self._model_pose.almost_equal(cam.pose, atol=1e-12)
        ):
            return self._model

        hidden = [replace(obj, visible=False) for obj in objects]
        frames = [
            render_scene(
                hidden, cam, replace(options, seed=derive_seed(options.seed, BACKGROUND_PURPOSE, shot))
            )
            for shot in range(self.num_bg_frames)
        ]
        self._model = train_background(frames)
        self._model_pose = cam.pose
        self.trainings += 1
        log_with_context(
            logger,
            logging.INFO,
            "Trained background model",
            stage="SEGMENTATION",
            frames=self.num_bg_frames,
            trainings=self.trainings,
        )
        return self._model

    def masks(
        self, objects: Sequence[RenderObject], cam: CameraModel, options: RenderOptions
    ) -> list[Mask]:
        model = self.background_for(objects, cam, options)
        masks = isolated_object_masks(objects, cam, model, self.params, options)
        self.subtractions += len(objects)
        return masks
