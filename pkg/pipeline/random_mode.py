"""Random-pose generation: scatter objects over free map space."""
from __future__ import annotations

import logging
from typing import Optional

from config.run_config import Config, Mode, ObjectSpec
from config.settings import Settings
from core.errors import InvalidConfig, NoFreePose, SynthSceneError
from core.logging_utils import get_logger, log_with_context
from core.progress import ProgressCallback
from occupancy.grid_map import GridMap, load_map_files, world_to_cell
from pipeline.runner import FrameEmitter, RunReport, resolve_input, wrap_frame_error
from sampling.pose_sampler import FootprintSpec, SamplerState, sample_pose
from timeline.transforms import Transform

logger = get_logger(__name__)

LOW_FREE_FRACTION = 0.01


def load_random_map(config: Config) -> GridMap:
    if config.map_path is None:
        raise InvalidConfig("Random mode needs map_path", field="map_path")
    grid = load_map_files(resolve_input(config, config.map_path))
    free_fraction = grid.free_fraction()
    if free_fraction < LOW_FREE_FRACTION:
        log_with_context(
            logger,
            logging.WARNING,
            "Map has very little free space",
            stage="RANDOM",
            free_fraction=f"{free_fraction:.4f}",
        )
    return grid


def place_objects(
    grid: GridMap, objects: list[ObjectSpec], state: SamplerState, *, datapoint: int
) -> list[Transform]:
    """Place objects one after another on a scratch copy of the map.

    Each placed footprint is marked occupied before the next object is drawn.
    """

    scratch = grid
    poses: list[Transform] = []
    for spec in objects:
        if spec.safety_radius is None:
            raise InvalidConfig(f"Object '{spec.name}' needs a safety_radius", object_name=spec.name)
        footprint = FootprintSpec(spec.safety_radius)
        try:
            pose = sample_pose(scratch, footprint, state)
        except NoFreePose as exc:
            raise NoFreePose(
                f"No free pose for object '{spec.name}' in datapoint {datapoint}",
                object_name=spec.name,
                datapoint=datapoint,
                max_attempts=state.max_attempts,
            ) from exc
        cell = world_to_cell(scratch, (pose.x, pose.y))
        scratch = scratch.with_occupied_disc(cell, footprint.radius_cells(grid.resolution))
        poses.append(Transform.from_xyz_rpy((pose.x, pose.y, 0.0), (0.0, 0.0, pose.theta)))
    return poses


def run_random(
    config: Config,
    settings: Optional[Settings] = None,
    *,
    progress_callback: Optional[ProgressCallback] = None,
) -> RunReport:
    if config.mode != Mode.RANDOM:
        raise InvalidConfig(f"run_random needs mode=random, got {config.mode}", field="mode")
    if config.frame_count is None:
        raise InvalidConfig("Random mode needs frame_count", field="frame_count")

    grid = load_random_map(config)
    state = SamplerState(rng_seed=config.seed, max_attempts=config.max_attempts)
    cam = config.camera.model()
    emitter = FrameEmitter(
        config,
        total_frames=config.frame_count,
        settings=settings,
        progress_callback=progress_callback,
        stage="RANDOM",
    )
    for datapoint in range(config.frame_count):
        poses = place_objects(grid, config.objects, state, datapoint=datapoint)
        try:
            emitter.emit(poses, cam, time_s=float(datapoint))
        except SynthSceneError as exc:
            raise wrap_frame_error(exc, datapoint=datapoint) from exc

    report = emitter.finish()
    log_with_context(
        logger, logging.INFO, "Sampler finished", stage="RANDOM", attempts=state.attempts
    )
    return report
