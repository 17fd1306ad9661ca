"""Run configuration: one JSON document describing a generation run."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()
from typing import Any, Optional

import numpy as np

from camera.projection import DEFAULT_NEAR_PLANE, CameraModel, CuboidShape
from core.errors import InvalidConfig, MissingRequired, TypeMismatch, UnreadableFile
from core.logging_utils import get_logger, log_with_context
from timeline.transforms import Transform

logger = get_logger(__name__)


class Mode(StrEnum):
    REPLAY = "replay"
    RANDOM = "random"


DEFAULTS: dict[str, Any] = {
    "frame_rate": 10.0,
    "seed": 0,
    "noise_sigma": 0.0,
    "output_dir": "output",
    "max_attempts": 1000,
}

SEGMENTATION_DEFAULTS: dict[str, Any] = {
    "num_bg_frames": 10,
    "k": 9.0,
    "tau": 225.0,
    "visibility_masks": False,
}

TOP_LEVEL_KEYS = {
    "mode",
    "pose_log_path",
    "map_path",
    "frame_count",
    "frame_rate",
    "objects",
    "camera",
    "output_dir",
    "writers",
    "seed",
    "noise_sigma",
    "segmentation",
    "max_attempts",
}
OBJECT_KEYS = {"name", "class_id", "class_name", "cuboid", "safety_radius", "keypoints"}
CAMERA_KEYS = {"fx", "fy", "cx", "cy", "width", "height", "near_plane", "pose", "frame"}
CUBOID_KEYS = {"size", "offset"}
WRITER_KEYS = {"kind", "params"}


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    class_id: int
    cuboid: CuboidShape
    class_name: str = ""
    safety_radius: Optional[float] = None
    keypoints: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))


@dataclass(frozen=True)
class CameraConfig:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    near_plane: float = DEFAULT_NEAR_PLANE
    pose: Optional[Transform] = None
    frame: Optional[str] = None

    def model(self, pose: Optional[Transform] = None) -> CameraModel:
        return CameraModel(
            fx=self.fx,
            fy=self.fy,
            cx=self.cx,
            cy=self.cy,
            width=self.width,
            height=self.height,
            pose=pose or self.pose or Transform.identity(),
            near_plane=self.near_plane,
        )


@dataclass(frozen=True)
class WriterConfig:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SegmentationConfig:
    num_bg_frames: int = 10
    k: float = 9.0
    tau: float = 225.0
    visibility_masks: bool = False


@dataclass
class Config:
    mode: Mode
    objects: list[ObjectSpec]
    camera: CameraConfig
    writers: list[WriterConfig]
    pose_log_path: Optional[str] = None
    map_path: Optional[str] = None
    frame_count: Optional[int] = None
    frame_rate: float = 10.0
    output_dir: str = "output"
    seed: int = 0
    noise_sigma: float = 0.0
    segmentation: SegmentationConfig = field(default_factory=SegmentationConfig)
    max_attempts: int = 1000
    config_path: Optional[str] = None
    warnings: list[str] = field(default_factory=list)


class _Validator:
    """Collects missing fields and warnings while reading the raw document."""

    def __init__(self) -> None:
        self.missing: list[str] = []
        self.warnings: list[str] = []

    def warn(self, message: str, **context: Any) -> None:
        self.warnings.append(message + "".join(f" {k}={v}" for k, v in context.items()))
        log_with_context(logger, logging.WARNING, message, stage="CONFIG", **context)

    def unknown_keys(self, raw: dict[str, Any], allowed: set[str], where: str) -> None:
        unknown = sorted(set(raw) - allowed)
        if unknown:
            self.warn("Unknown configuration keys ignored", section=where, keys=",".join(unknown))

    def require(self, raw: dict[str, Any], key: str, where: str = "") -> bool:
        if key not in raw or raw[key] is None:
            self.missing.append(f"{where}{key}")
            return False
        return True


def _number(value: Any, name: str, *, integer: bool = False) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeMismatch(f"'{name}' must be a number", field=name)
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise TypeMismatch(f"'{name}' must be an integer", field=name)
        return int(value)
    if not math.isfinite(value):
        raise TypeMismatch(f"'{name}' must be finite", field=name)
    return float(value)


def _vector(value: Any, name: str, length: int) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise TypeMismatch(f"'{name}' must be a list of {length} numbers", field=name)
    return [_number(item, f"{name}[{index}]") for index, item in enumerate(value)]


def _object_of(value: Any, name: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise TypeMismatch(f"'{name}' must be an object", field=name)
    return value


def parse_transform(value: Any, name: str) -> Transform:
    """``{"translation": [x, y, z], "rotation": [qx, qy, qz, qw]}``; both optional."""

    raw = _object_of(value, name)
    translation = _vector(raw.get("translation", [0.0, 0.0, 0.0]), f"{name}.translation", 3)
    rotation = _vector(raw.get("rotation", [0.0, 0.0, 0.0, 1.0]), f"{name}.rotation", 4)
    if np.linalg.norm(rotation) == 0:
        raise TypeMismatch(f"'{name}.rotation' must be a non-zero quaternion", field=name)
    return Transform(translation, rotation)


def _parse_object(raw: Any, index: int, mode: Optional[Mode], check: _Validator) -> Optional[ObjectSpec]:
    where = f"objects[{index}]."
    raw = _object_of(raw, f"objects[{index}]")
    check.unknown_keys(raw, OBJECT_KEYS, f"objects[{index}]")
    present = [check.require(raw, key, where) for key in ("name", "class_id", "cuboid")]
    if mode == Mode.RANDOM:
        present.append(check.require(raw, "safety_radius", where))
    cuboid_raw = raw.get("cuboid")
    if isinstance(cuboid_raw, dict):
        check.unknown_keys(cuboid_raw, CUBOID_KEYS, f"objects[{index}].cuboid")
        present.append(check.require(cuboid_raw, "size", f"{where}cuboid."))
    if not all(present):
        return None

    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise TypeMismatch(f"'{where}name' must be a non-empty string", field=f"{where}name")
    class_id = _number(raw["class_id"], f"{where}class_id", integer=True)
    if class_id < 0:
        raise InvalidConfig(f"'{where}class_id' must be non-negative", field=f"{where}class_id")

    cuboid_raw = _object_of(raw["cuboid"], f"{where}cuboid")
    size = _vector(cuboid_raw["size"], f"{where}cuboid.size", 3)
    if any(dim <= 0 for dim in size):
        raise InvalidConfig(f"'{where}cuboid.size' must be positive", field=f"{where}cuboid.size")
    offset = (
        parse_transform(cuboid_raw["offset"], f"{where}cuboid.offset")
        if "offset" in cuboid_raw
        else Transform.identity()
    )

    safety_radius = None
    if raw.get("safety_radius") is not None:
        safety_radius = _number(raw["safety_radius"], f"{where}safety_radius")
        if safety_radius <= 0:
            raise InvalidConfig(f"'{where}safety_radius' must be positive", field=f"{where}safety_radius")

    keypoints_raw = raw.get("keypoints", [])
    if not isinstance(keypoints_raw, list):
        raise TypeMismatch(f"'{where}keypoints' must be a list", field=f"{where}keypoints")
    keypoints = np.array(
        [_vector(point, f"{where}keypoints[{k}]", 3) for k, point in enumerate(keypoints_raw)],
        dtype=np.float64,
    ).reshape(-1, 3)

    class_name = raw.get("class_name", name)
    if not isinstance(class_name, str):
        raise TypeMismatch(f"'{where}class_name' must be a string", field=f"{where}class_name")

    return ObjectSpec(
        name=name,
        class_id=class_id,
        cuboid=CuboidShape(size=tuple(size), offset=offset),  # type: ignore[arg-type]
        class_name=class_name,
        safety_radius=safety_radius,
        keypoints=keypoints,
    )


def _parse_camera(raw: Any, mode: Optional[Mode], check: _Validator) -> Optional[CameraConfig]:
    raw = _object_of(raw, "camera")
    check.unknown_keys(raw, CAMERA_KEYS, "camera")
    present = [check.require(raw, key, "camera.") for key in ("fx", "fy", "cx", "cy", "width", "height")]
    if mode == Mode.RANDOM:
        present.append(check.require(raw, "pose", "camera."))
    elif "pose" not in raw and "frame" not in raw:
        check.missing.append("camera.pose|camera.frame")
        present.append(False)
    if not all(present):
        return None

    width = _number(raw["width"], "camera.width", integer=True)
    height = _number(raw["height"], "camera.height", integer=True)
    fx = _number(raw["fx"], "camera.fx")
    fy = _number(raw["fy"], "camera.fy")
    if width < 1 or height < 1 or fx <= 0 or fy <= 0:
        raise InvalidConfig("camera dimensions and focal lengths must be positive")
    near_plane = _number(raw.get("near_plane", DEFAULT_NEAR_PLANE), "camera.near_plane")
    if near_plane <= 0:
        raise InvalidConfig("camera.near_plane must be positive", field="camera.near_plane")

    frame = raw.get("frame")
    if frame is not None and (not isinstance(frame, str) or not frame):
        raise TypeMismatch("'camera.frame' must be a non-empty string", field="camera.frame")
    pose = parse_transform(raw["pose"], "camera.pose") if raw.get("pose") is not None else None
    if pose is not None and frame is not None:
        check.warn("Camera pose literal overrides the pose-log camera frame", frame=frame)

    return CameraConfig(
        fx=fx,
        fy=fy,
        cx=_number(raw["cx"], "camera.cx"),
        cy=_number(raw["cy"], "camera.cy"),
        width=width,
        height=height,
        near_plane=near_plane,
        pose=pose,
        frame=frame,
    )


def _parse_writers(raw: Any, check: _Validator) -> list[WriterConfig]:
    if not isinstance(raw, list):
        raise TypeMismatch("'writers' must be a list", field="writers")
    if not raw:
        raise InvalidConfig("'writers' must name at least one writer", field="writers")
    writers = []
    for index, entry in enumerate(raw):
        entry = _object_of(entry, f"writers[{index}]")
        check.unknown_keys(entry, WRITER_KEYS, f"writers[{index}]")
        if not check.require(entry, "kind", f"writers[{index}]."):
            continue
        if not isinstance(entry["kind"], str):
            raise TypeMismatch(f"'writers[{index}].kind' must be a string", field="kind")
        params = _object_of(entry.get("params", {}), f"writers[{index}].params")
        writers.append(WriterConfig(kind=entry["kind"], params=dict(params)))
    return writers


def _with_default(raw: dict[str, Any], key: str, default: Any, check: _Validator, section: str = "") -> Any:
    if key in raw and raw[key] is not None:
        return raw[key]
    check.warn("Optional parameter unspecified, using default", field=f"{section}{key}", default=default)
    return default


def parse_config(raw: Any, *, mode_override: Optional[str] = None, config_path: Optional[str] = None) -> Config:
    """Validate a raw configuration document.

    Every missing required field is reported in one MissingRequired error.
    """

    raw = _object_of(raw, "config")
    check = _Validator()
    check.unknown_keys(raw, TOP_LEVEL_KEYS, "config")

    mode_raw = mode_override or raw.get("mode")
    mode: Optional[Mode] = None
    if mode_raw is None:
        check.missing.append("mode")
    else:
        try:
            mode = Mode(str(mode_raw).lower())
        except ValueError as exc:
            raise InvalidConfig(f"Unknown mode '{mode_raw}'", field="mode") from exc

    for key in ("objects", "camera", "writers"):
        check.require(raw, key)
    if mode == Mode.REPLAY:
        check.require(raw, "pose_log_path")
    elif mode == Mode.RANDOM:
        check.require(raw, "map_path")
        check.require(raw, "frame_count")

    objects: list[ObjectSpec] = []
    if raw.get("objects") is not None:
        if not isinstance(raw["objects"], list):
            raise TypeMismatch("'objects' must be a list", field="objects")
        if not raw["objects"]:
            raise InvalidConfig("'objects' must list at least one object", field="objects")
        for index, entry in enumerate(raw["objects"]):
            parsed = _parse_object(entry, index, mode, check)
            if parsed is not None:
                objects.append(parsed)

    camera = _parse_camera(raw["camera"], mode, check) if raw.get("camera") is not None else None
    writers = _parse_writers(raw["writers"], check) if raw.get("writers") is not None else []

    if check.missing:
        raise MissingRequired(check.missing)

    names = [obj.name for obj in objects]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise InvalidConfig(f"Object names must be unique: {', '.join(duplicates)}", names=duplicates)

    frame_rate = DEFAULTS["frame_rate"]
    if mode == Mode.REPLAY:
        frame_rate = _number(_with_default(raw, "frame_rate", DEFAULTS["frame_rate"], check), "frame_rate")
        if frame_rate <= 0:
            raise InvalidConfig("'frame_rate' must be positive", field="frame_rate")

    frame_count = None
    if mode == Mode.RANDOM:
        frame_count = _number(raw["frame_count"], "frame_count", integer=True)
        if frame_count < 0:
            raise InvalidConfig("'frame_count' must be non-negative", field="frame_count")

    seed = _number(_with_default(raw, "seed", DEFAULTS["seed"], check), "seed", integer=True)
    noise_sigma = _number(_with_default(raw, "noise_sigma", DEFAULTS["noise_sigma"], check), "noise_sigma")
    if noise_sigma < 0:
        raise InvalidConfig("'noise_sigma' must be non-negative", field="noise_sigma")
    max_attempts = _number(
        _with_default(raw, "max_attempts", DEFAULTS["max_attempts"], check), "max_attempts", integer=True
    )
    if max_attempts < 1:
        raise InvalidConfig("'max_attempts' must be at least 1", field="max_attempts")
    output_dir = _with_default(raw, "output_dir", DEFAULTS["output_dir"], check)
    if not isinstance(output_dir, str) or not output_dir:
        raise TypeMismatch("'output_dir' must be a non-empty string", field="output_dir")

    seg_raw = _object_of(raw.get("segmentation") or {}, "segmentation")
    check.unknown_keys(seg_raw, set(SEGMENTATION_DEFAULTS), "segmentation")
    num_bg_frames = _number(
        _with_default(seg_raw, "num_bg_frames", SEGMENTATION_DEFAULTS["num_bg_frames"], check, "segmentation."),
        "segmentation.num_bg_frames",
        integer=True,
    )
    if num_bg_frames < 1:
        raise InvalidConfig("'segmentation.num_bg_frames' must be at least 1", field="num_bg_frames")
    k = _number(_with_default(seg_raw, "k", SEGMENTATION_DEFAULTS["k"], check, "segmentation."), "segmentation.k")
    tau = _number(
        _with_default(seg_raw, "tau", SEGMENTATION_DEFAULTS["tau"], check, "segmentation."), "segmentation.tau"
    )
    if k < 0 or tau < 0:
        raise InvalidConfig("segmentation k and tau must be non-negative")
    visibility = seg_raw.get("visibility_masks", SEGMENTATION_DEFAULTS["visibility_masks"])
    if not isinstance(visibility, bool):
        raise TypeMismatch("'segmentation.visibility_masks' must be a boolean", field="visibility_masks")

    if mode == Mode.RANDOM and camera is not None and camera.frame is not None:
        check.warn("camera.frame is ignored in random mode", frame=camera.frame)

    if any(writer.kind == "keypoints" for writer in writers):
        for obj in objects:
            if len(obj.keypoints) == 0:
                check.warn("Object has no keypoints for the keypoints writer", object=obj.name)

    assert mode is not None and camera is not None
    return Config(
        mode=mode,
        objects=objects,
        camera=camera,
        writers=writers,
        pose_log_path=raw.get("pose_log_path"),
        map_path=raw.get("map_path"),
        frame_count=frame_count,
        frame_rate=frame_rate,
        output_dir=output_dir,
        seed=seed,
        noise_sigma=noise_sigma,
        segmentation=SegmentationConfig(
            num_bg_frames=num_bg_frames, k=k, tau=tau, visibility_masks=visibility
        ),
        max_attempts=max_attempts,
        config_path=config_path,
        warnings=check.warnings,
    )


def load_config(path: str, *, mode_override: Optional[str] = None) -> Config:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UnreadableFile(f"Cannot read configuration {path}: {exc}", path=path) from exc
    return parse_config(raw, mode_override=mode_override, config_path=path)
