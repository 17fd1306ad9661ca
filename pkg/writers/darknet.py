"""Darknet/YOLO box labels: one text file per image plus an image list."""
from __future__ import annotations

import os
from typing import Any

from writers.base import FormatWriter, LabelInputs

DEFAULT_LIST_NAME = "train_list.txt"


class DarknetWriter(FormatWriter):
    kind = "darknet"

    def __init__(self, output_dir: str, params: dict[str, Any] | None = None):
        super().__init__(output_dir, params)
        self.list_name = str(self.params.get("list_name", DEFAULT_LIST_NAME))
        self._image_paths: list[str] = []

    def requires_segmentation(self) -> bool:
        return False

    def write_scene(self, inputs: LabelInputs) -> None:
        lines = [
            label.box.format_line() + "\n"
            for label in inputs.objects
            if label.box is not None
        ]
        self.write_text(f"frame_{inputs.frame_index:06d}.txt", "".join(lines))
        self._image_paths.append(inputs.image_path)

    def finalize(self) -> None:
        list_dir = os.path.abspath(self.output_dir)
        lines = [
            os.path.relpath(os.path.abspath(path), list_dir).replace(os.sep, "/") + "\n"
            for path in self._image_paths
        ]
        self.write_text(self.list_name, "".join(lines))
