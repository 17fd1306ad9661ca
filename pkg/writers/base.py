from __future__ import annotations

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from camera.projection import CameraModel, DarknetBox, PixelRect
from core.errors import IoFailure
from render.image_io import Mask
from timeline.transforms import Transform

FrameLookup = Callable[[str], Transform]


@dataclass
class ObjectLabel:
    """Everything a writer may need about one object in one frame."""

    name: str
    class_id: int
    class_name: str
    pose_world: Transform
    rect: Optional[PixelRect]
    box: Optional[DarknetBox]
    vertices_object: np.ndarray
    vertices_camera: np.ndarray
    vertices_pixels: np.ndarray
    keypoints_object: np.ndarray
    keypoints_pixels: np.ndarray
    mask: Optional[Mask] = None
    visible_mask: Optional[Mask] = None

    @property
    def visible(self) -> bool:
        return self.rect is not None


@dataclass
class LabelInputs:
    frame_index: int
    time: float
    image_path: str
    image_width: int
    image_height: int
    camera: CameraModel
    objects: list[ObjectLabel]
    segmentation: bool = False
    # Resolves a frame name to the world <- frame transform at this frame's time.
    frame_lookup: Optional[FrameLookup] = field(default=None, repr=False)


class FormatWriter(ABC):
    """A label format plugin.

    The pipeline calls ``write_scene`` once per frame in frame order and
    ``finalize`` exactly once after the last frame.
    """

    kind: str = ""

    def __init__(self, output_dir: str, params: dict[str, Any] | None = None):
        self.output_dir = output_dir
        self.params = dict(params or {})
        self.files_written = 0

    @abstractmethod
    def write_scene(self, inputs: LabelInputs) -> None:
        ...

    @abstractmethod
    def finalize(self) -> None:
        ...

    @abstractmethod
    def requires_segmentation(self) -> bool:
        ...

    def requires_visibility(self) -> bool:
        return False

    def output_path(self, file_name: str) -> str:
        return os.path.join(self.output_dir, file_name)

    def write_text(self, file_name: str, body: str) -> str:
        path = self.output_path(file_name)
        try:
            os.makedirs(self.output_dir, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(body)
        except OSError as exc:
            raise IoFailure(f"Cannot write {path}: {exc}", path=path, writer=self.kind) from exc
        self.files_written += 1
        return path


def format_number(value: float) -> str:
    if np.isnan(value):
        return "nan"
    return f"{value:.6f}"
