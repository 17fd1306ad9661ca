"""Timeline replay: step a recorded pose log at a fixed frame rate."""
from __future__ import annotations

import logging
from typing import Optional

from config.run_config import Config, Mode
from config.settings import Settings
from core.errors import InvalidConfig, SynthSceneError
from core.logging_utils import get_logger, log_with_context
from core.progress import ProgressCallback
from pipeline.runner import FrameEmitter, RunReport, resolve_input, wrap_frame_error
from timeline.clock import ReplayClock, sample_times
from timeline.pose_log import load_pose_log
from timeline.tree import TransformTree, lookup_transform, valid_time_range

logger = get_logger(__name__)


def required_frames(config: Config) -> list[str]:
    frames = [obj.name for obj in config.objects]
    if config.camera.pose is None and config.camera.frame is not None:
        frames.append(config.camera.frame)
    return frames


def plan_replay(config: Config, tree: TransformTree) -> list[float]:
    """Sample times covering the window every required frame shares."""

    start, end = valid_time_range(tree, required_frames(config))
    times = sample_times(ReplayClock(start_time=start, end_time=end, frame_rate=config.frame_rate))
    log_with_context(
        logger,
        logging.INFO,
        "Replay window computed",
        stage="REPLAY",
        start=start,
        end=end,
        frames=len(times),
    )
    return times


def load_replay_tree(config: Config) -> TransformTree:
    if config.pose_log_path is None:
        raise InvalidConfig("Replay mode needs pose_log_path", field="pose_log_path")
    return load_pose_log(resolve_input(config, config.pose_log_path))


def run_replay(
    config: Config,
    settings: Optional[Settings] = None,
    *,
    progress_callback: Optional[ProgressCallback] = None,
) -> RunReport:
    """Render and label one frame per sample time of the pose log.

    Object frames are looked up relative to the root of the first object's
    tree; the camera pose literal wins over the camera frame when both exist.
    """

    if config.mode != Mode.REPLAY:
        raise InvalidConfig(f"run_replay needs mode=replay, got {config.mode}", field="mode")
    tree = load_replay_tree(config)
    times = plan_replay(config, tree)
    world = tree.root_of(config.objects[0].name)

    emitter = FrameEmitter(
        config,
        total_frames=len(times),
        settings=settings,
        progress_callback=progress_callback,
        stage="REPLAY",
    )
    for frame_index, t in enumerate(times):
        try:
            poses = [lookup_transform(tree, world, obj.name, t) for obj in config.objects]
            if config.camera.pose is not None:
                cam = config.camera.model()
            else:
                cam = config.camera.model(lookup_transform(tree, world, config.camera.frame, t))

            def frame_lookup(name: str, _t: float = t):
                return lookup_transform(tree, world, name, _t)

            emitter.emit(poses, cam, time_s=t, frame_lookup=frame_lookup)
        except SynthSceneError as exc:
            raise wrap_frame_error(exc, frame_index=frame_index, time=t) from exc
    return emitter.finish()
