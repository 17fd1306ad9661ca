"""Cuboid corners expressed in a chosen reference frame."""
from __future__ import annotations

from typing import Any

from camera.projection import transform_points
from core.errors import UnknownFrame
from writers.base import FormatWriter, LabelInputs, format_number

CAMERA_FRAME = "camera"
WORLD_FRAME = "world"


class VerticesWriter(FormatWriter):
    """Writes ``<class_id> <name> x1 y1 z1 ... x8 y8 z8`` per object.

    ``frame`` is ``camera`` (default), ``world`` or any frame of the pose log.
    """

    kind = "vertices"

    def __init__(self, output_dir: str, params: dict[str, Any] | None = None):
        super().__init__(output_dir, params)
        self.frame = str(self.params.get("frame", CAMERA_FRAME))

    def requires_segmentation(self) -> bool:
        return False

    def _frame_from_world(self, inputs: LabelInputs):
        if self.frame == CAMERA_FRAME:
            return inputs.camera.world_to_camera()
        if self.frame == WORLD_FRAME:
            return None
        if inputs.frame_lookup is None:
            raise UnknownFrame(f"Frame '{self.frame}' cannot be resolved in this run", frame=self.frame)
        return inputs.frame_lookup(self.frame).inverse()

    def write_scene(self, inputs: LabelInputs) -> None:
        frame_from_world = self._frame_from_world(inputs)
        lines = []
        for label in inputs.objects:
            corners = transform_points(label.vertices_object, label.pose_world)
            if frame_from_world is not None:
                corners = transform_points(corners, frame_from_world)
            tokens = [str(label.class_id), label.name]
            tokens.extend(format_number(float(value)) for value in corners.reshape(-1))
            lines.append(" ".join(tokens) + "\n")
        self.write_text(f"frame_{inputs.frame_index:06d}_vertices.txt", "".join(lines))

    def finalize(self) -> None:
        return None
