"""COCO instance segmentation with uncompressed RLE masks.

Key order in ``annotations.json`` is fixed: the document holds ``images``,
``annotations`` and ``categories`` in that order, and each entry keeps the
field order written below.
"""
from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from core.errors import MissingMask
from render.image_io import Mask
from writers.base import FormatWriter, LabelInputs

DEFAULT_FILE_NAME = "annotations.json"
MASK_SOURCES = {"isolated", "visibility"}


def encode_rle(mask: Mask) -> dict[str, Any]:
    """Column-major run lengths, starting with the (possibly empty) zero run."""

    flat = mask.bits.flatten(order="F").astype(np.int8)
    counts: list[int] = []
    if flat.size == 0:
        return {"size": [mask.height, mask.width], "counts": [0]}
    change_points = np.flatnonzero(np.diff(flat)) + 1
    boundaries = np.concatenate(([0], change_points, [flat.size]))
    runs = np.diff(boundaries).tolist()
    if flat[0] == 1:
        counts.append(0)
    counts.extend(int(run) for run in runs)
    return {"size": [mask.height, mask.width], "counts": counts}


def mask_bbox(mask: Mask) -> list[int]:
    """Tight [x, y, w, h] pixel bounds of the set bits."""

    rows = np.flatnonzero(mask.bits.any(axis=1))
    cols = np.flatnonzero(mask.bits.any(axis=0))
    x0, x1 = int(cols[0]), int(cols[-1])
    y0, y1 = int(rows[0]), int(rows[-1])
    return [x0, y0, x1 - x0 + 1, y1 - y0 + 1]


class CocoWriter(FormatWriter):
    kind = "coco"

    def __init__(self, output_dir: str, params: dict[str, Any] | None = None):
        super().__init__(output_dir, params)
        self.file_name = str(self.params.get("file_name", DEFAULT_FILE_NAME))
        self.mask_source = str(self.params.get("mask_source", "isolated"))
        if self.mask_source not in MASK_SOURCES:
            raise ValueError(f"mask_source must be one of {sorted(MASK_SOURCES)}")
        self._images: list[dict[str, Any]] = []
        self._annotations: list[dict[str, Any]] = []
        self._categories: dict[int, str] = {}

    def requires_segmentation(self) -> bool:
        return self.mask_source == "isolated"

    def requires_visibility(self) -> bool:
        return self.mask_source == "visibility"

    def write_scene(self, inputs: LabelInputs) -> None:
        image_id = len(self._images) + 1
        self._images.append(
            {
                "id": image_id,
                "file_name": os.path.relpath(
                    os.path.abspath(inputs.image_path), os.path.abspath(self.output_dir)
                ).replace(os.sep, "/"),
                "width": inputs.image_width,
                "height": inputs.image_height,
            }
        )

        for label in inputs.objects:
            self._categories.setdefault(label.class_id, label.class_name)
            mask = label.visible_mask if self.mask_source == "visibility" else label.mask
            if mask is None:
                raise MissingMask(
                    f"Object '{label.name}' has no {self.mask_source} mask in frame {inputs.frame_index}",
                    object_name=label.name,
                    frame_index=inputs.frame_index,
                )
            area = mask.count()
            if area == 0:
                continue
            self._annotations.append(
                {
                    "id": len(self._annotations) + 1,
                    "image_id": image_id,
                    "category_id": label.class_id,
                    "bbox": mask_bbox(mask),
                    "area": area,
                    "segmentation": encode_rle(mask),
                    "iscrowd": 0,
                }
            )

    def finalize(self) -> None:
        document = {
            "images": self._images,
            "annotations": self._annotations,
            "categories": [
                {"id": class_id, "name": name} for class_id, name in sorted(self._categories.items())
            ],
        }
        self.write_text(self.file_name, json.dumps(document, indent=2) + "\n")
