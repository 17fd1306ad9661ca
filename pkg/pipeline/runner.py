"""Shared per-frame emission for both generation loops."""
from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from camera.projection import CameraModel
from config.run_config import Config
from config.settings import Settings
from core.errors import FrameGenerationError, SynthSceneError
from core.logging_utils import get_logger, log_with_context
from core.progress import ProgressCallback, ProgressReporter
from render.background import SubtractorParams
from render.image_io import write_mask_pgm, write_ppm
from render.rasterizer import RenderOptions
from render.segmentation import SegmentationEngine
from sampling.rng import derive_seed
from timeline.transforms import Transform
from pipeline.snapshot import build_label_inputs, capture_snapshot
from writers.base import FrameLookup
from writers.registry import (
    WriterRegistry,
    any_requires_segmentation,
    any_requires_visibility,
    build_registry,
)

logger = get_logger(__name__)

FRAME_PURPOSE = 0
IMAGES_DIR = "images"
MASKS_DIR = "masks"


@dataclass
class RunReport:
    mode: str
    output_dir: str
    frames: int = 0
    files_per_writer: dict[str, int] = field(default_factory=dict)
    wall_time_s: float = 0.0
    subtractor_invocations: int = 0
    background_trainings: int = 0
    progress: list[int] = field(default_factory=list)


def resolve_input(config: Config, path: str) -> str:
    """Input paths in the config are relative to the config file."""

    if os.path.isabs(path) or not config.config_path:
        return path
    return os.path.join(os.path.dirname(os.path.abspath(config.config_path)), path)


class FrameEmitter:
    """Renders, labels and writes frames in order, then finalizes writers."""

    def __init__(
        self,
        config: Config,
        *,
        total_frames: int,
        settings: Optional[Settings] = None,
        progress_callback: Optional[ProgressCallback] = None,
        stage: str = "PIPELINE",
    ):
        self.config = config
        self.settings = settings or Settings()
        self.stage = stage
        self.started = time.perf_counter()
        self.registry: WriterRegistry = build_registry(config.writers, config.output_dir)
        self.engine: Optional[SegmentationEngine] = None
        if any_requires_segmentation(self.registry):
            self.engine = SegmentationEngine(
                params=SubtractorParams(k=config.segmentation.k, tau=config.segmentation.tau),
                num_bg_frames=config.segmentation.num_bg_frames,
            )
        self.with_visibility = config.segmentation.visibility_masks or any_requires_visibility(
            self.registry
        )
        self.progress = ProgressReporter(total_frames, stage=stage, callback=progress_callback)
        self.frames = 0
        log_with_context(
            logger,
            logging.INFO,
            "Generation started",
            stage=stage,
            frames=total_frames,
            writers=",".join(writer.kind for writer in self.registry),
            segmentation=self.engine is not None,
        )

    def image_path(self, frame_index: int) -> str:
        return os.path.join(self.config.output_dir, IMAGES_DIR, f"frame_{frame_index:06d}.ppm")

    def mask_path(self, frame_index: int, object_index: int) -> str:
        return os.path.join(
            self.config.output_dir, MASKS_DIR, f"mask_{frame_index:06d}_obj{object_index:02d}.pgm"
        )

    def emit(
        self,
        poses: Sequence[Transform],
        cam: CameraModel,
        *,
        time_s: float,
        frame_lookup: Optional[FrameLookup] = None,
    ) -> None:
        frame_index = self.frames
        options = RenderOptions(
            noise_sigma=self.config.noise_sigma,
            seed=derive_seed(self.config.seed, FRAME_PURPOSE, frame_index),
            workers=self.settings.raster_workers,
        )
        snapshot = capture_snapshot(
            self.config.objects,
            poses,
            cam,
            time=time_s,
            options=options,
            engine=self.engine,
            with_visibility=self.with_visibility,
        )

        image_path = self.image_path(frame_index)
        os.makedirs(os.path.dirname(image_path), exist_ok=True)
        write_ppm(snapshot.frame, image_path)
        if snapshot.masks is not None:
            os.makedirs(os.path.join(self.config.output_dir, MASKS_DIR), exist_ok=True)
            for object_index, mask in enumerate(snapshot.masks):
                write_mask_pgm(mask, self.mask_path(frame_index, object_index))

        inputs = build_label_inputs(
            snapshot,
            self.config.objects,
            frame_index=frame_index,
            image_path=image_path,
            frame_lookup=frame_lookup,
        )
        self.registry.write_scene(inputs)
        self.frames += 1
        self.progress.update(self.frames)
        log_with_context(
            logger, logging.DEBUG, "Frame written", stage=self.stage, frame_index=frame_index, time=time_s
        )

    def finish(self) -> RunReport:
        self.registry.finalize()
        self.progress.finish()
        report = RunReport(
            mode=self.config.mode.value,
            output_dir=self.config.output_dir,
            frames=self.frames,
            files_per_writer=self.registry.file_counts(),
            wall_time_s=time.perf_counter() - self.started,
            subtractor_invocations=self.engine.subtractions if self.engine else 0,
            background_trainings=self.engine.trainings if self.engine else 0,
            progress=list(self.progress.emitted),
        )
        log_with_context(
            logger,
            logging.INFO,
            "Generation completed",
            stage=self.stage,
            frames=report.frames,
            wall_time_s=f"{report.wall_time_s:.2f}",
            subtractor_invocations=report.subtractor_invocations,
        )
        return report


def wrap_frame_error(exc: SynthSceneError, **frame_context) -> FrameGenerationError:
    if isinstance(exc, FrameGenerationError):
        return exc
    return FrameGenerationError(exc, **frame_context)
