"""Writer registry: ordered dispatch of label writers and their output directories."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Iterable

from core.errors import InvalidConfig
from core.logging_utils import get_logger, log_with_context
from writers.base import FormatWriter, LabelInputs
from writers.coco import CocoWriter
from writers.darknet import DarknetWriter
from writers.keypoints import KeypointWriter
from writers.vertices import VerticesWriter

logger = get_logger(__name__)

WRITER_KINDS: dict[str, type[FormatWriter]] = {
    DarknetWriter.kind: DarknetWriter,
    CocoWriter.kind: CocoWriter,
    KeypointWriter.kind: KeypointWriter,
    VerticesWriter.kind: VerticesWriter,
}


class WriterSequenceError(RuntimeError):
    """Raised when a writer is driven outside write_scene* -> finalize."""


@dataclass
class WriterRegistry:
    """Ordered writers; registration order is invocation order."""

    writers: list[FormatWriter] = field(default_factory=list)
    scenes_written: int = 0
    finalized: bool = False

    def register(self, writer: FormatWriter) -> None:
        if self.finalized or self.scenes_written:
            raise WriterSequenceError("Writers must be registered before the first frame")
        self.writers.append(writer)

    def write_scene(self, inputs: LabelInputs) -> None:
        if self.finalized:
            raise WriterSequenceError("write_scene called after finalize")
        for writer in self.writers:
            writer.write_scene(inputs)
        self.scenes_written += 1

    def finalize(self) -> None:
        if self.finalized:
            raise WriterSequenceError("finalize called twice")
        self.finalized = True
        for writer in self.writers:
            writer.finalize()
            log_with_context(
                logger,
                logging.INFO,
                "Writer finalized",
                stage="WRITER",
                kind=writer.kind,
                files=writer.files_written,
            )

    def file_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for writer in self.writers:
            counts[writer.kind] = counts.get(writer.kind, 0) + writer.files_written
        return counts

    def __iter__(self):
        return iter(self.writers)

    def __len__(self) -> int:
        return len(self.writers)


def any_requires_segmentation(registry: Iterable[FormatWriter]) -> bool:
    return any(writer.requires_segmentation() for writer in registry)


def any_requires_visibility(registry: Iterable[FormatWriter]) -> bool:
    return any(writer.requires_visibility() for writer in registry)


def build_registry(writer_configs: Iterable[Any], output_dir: str) -> WriterRegistry:
    """Instantiate writers from ``{kind, params}`` entries.

    Each writer gets ``<output_dir>/<kind>``; a repeated kind gets a numeric
    suffix so directories stay exclusive.
    """

    registry = WriterRegistry()
    seen: dict[str, int] = {}
    for entry in writer_configs:
        kind = entry.kind
        writer_cls = WRITER_KINDS.get(kind)
        if writer_cls is None:
            raise InvalidConfig(f"Unknown writer kind '{kind}'", kind=kind)
        seen[kind] = seen.get(kind, 0) + 1
        directory = kind if seen[kind] == 1 else f"{kind}_{seen[kind]}"
        try:
            writer = writer_cls(os.path.join(output_dir, directory), entry.params)
        except ValueError as exc:
            raise InvalidConfig(f"Writer '{kind}': {exc}", kind=kind) from exc
        registry.register(writer)
    return registry
