"""Projected keypoint labels, one text file per frame."""
from __future__ import annotations

from writers.base import FormatWriter, LabelInputs, format_number


class KeypointWriter(FormatWriter):
    kind = "keypoints"

    def requires_segmentation(self) -> bool:
        return False

    def write_scene(self, inputs: LabelInputs) -> None:
        lines = []
        for label in inputs.objects:
            tokens = [str(label.class_id), label.name]
            for u, v in label.keypoints_pixels:
                tokens.extend((format_number(float(u)), format_number(float(v))))
            lines.append(" ".join(tokens) + "\n")
        self.write_text(f"frame_{inputs.frame_index:06d}_keypoints.txt", "".join(lines))

    def finalize(self) -> None:
        return None
