"""Test configuration helpers."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

CAMERA = {"fx": 100.0, "fy": 100.0, "cx": 80.0, "cy": 60.0, "width": 160, "height": 120}
# Looks straight down at the map plane from 6 m: camera z is world -z.
TOP_DOWN_POSE = {"translation": [2.5, 2.5, 6.0], "rotation": [1.0, 0.0, 0.0, 0.0]}


def pose_line(t, parent, child, tx=0.0, ty=0.0, tz=0.0, q=(0.0, 0.0, 0.0, 1.0)) -> str:
    qx, qy, qz, qw = q
    return json.dumps(
        {"t": t, "parent": parent, "child": child, "tx": tx, "ty": ty, "tz": tz,
         "qx": qx, "qy": qy, "qz": qz, "qw": qw}
    )


@pytest.fixture()
def write_json(tmp_path):
    def _write(name: str, document) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture()
def replay_config(tmp_path, write_json):
    """Two cubes crossing in front of a static camera over one second."""

    def _build(writers=None, *, static_only=False, **overrides) -> str:
        lines = [pose_line(None, "world", "camera")]
        if static_only:
            lines += [
                pose_line(None, "world", "robot1", tx=-1.0, tz=5.0),
                pose_line(None, "world", "robot2", tx=1.0, tz=6.0),
            ]
        else:
            lines += [
                pose_line(0.0, "world", "robot1", tx=-1.0, tz=5.0),
                pose_line(1.0, "world", "robot1", tx=-0.5, tz=5.0),
                pose_line(0.0, "world", "robot2", tx=1.0, tz=6.0),
                pose_line(1.0, "world", "robot2", tx=0.5, ty=0.2, tz=6.0),
            ]
        (tmp_path / "poses.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
        document = {
            "mode": "replay",
            "pose_log_path": "poses.jsonl",
            "frame_rate": 10,
            "seed": 7,
            "noise_sigma": 0.0,
            "output_dir": str(tmp_path / "out"),
            "max_attempts": 1000,
            "segmentation": {"num_bg_frames": 3, "k": 9.0, "tau": 225.0},
            "objects": [
                {"name": "robot1", "class_id": 1, "class_name": "robot",
                 "cuboid": {"size": [0.6, 0.6, 0.6]}, "keypoints": [[0, 0, 0]]},
                {"name": "robot2", "class_id": 2, "class_name": "cart",
                 "cuboid": {"size": [0.8, 0.5, 0.5]}, "keypoints": [[0, 0, 0]]},
            ],
            "camera": {**CAMERA, "frame": "camera"},
            "writers": writers if writers is not None else [{"kind": "darknet"}],
        }
        document.update(overrides)
        return write_json("replay.json", document)

    return _build


@pytest.fixture()
def write_map(tmp_path, write_json):
    """Write a PGM raster plus sidecar; ``free`` is a bool array, row 0 on top."""

    def _write(free: np.ndarray, *, resolution: float = 0.1, origin=(0.0, 0.0, 0.0)) -> str:
        gray = np.where(free, 254, 0).astype(np.uint8)
        Image.fromarray(gray).save(tmp_path / "map.pgm", format="PPM")
        return write_json(
            "map.json",
            {"image_path": "map.pgm", "resolution": resolution, "origin": list(origin),
             "occupied_thresh": 0.65, "free_thresh": 0.196, "negate": False},
        )

    return _write


@pytest.fixture()
def random_config(tmp_path, write_json, write_map):
    def _build(free=None, *, objects=None, writers=None, resolution=0.1, **overrides) -> str:
        if free is None:
            free = np.ones((50, 50), dtype=bool)
        map_path = write_map(free, resolution=resolution)
        document = {
            "mode": "random",
            "map_path": map_path,
            "frame_count": 5,
            "seed": 3,
            "noise_sigma": 0.0,
            "output_dir": str(tmp_path / "out"),
            "max_attempts": 1000,
            "frame_rate": 10,
            "segmentation": {"num_bg_frames": 2, "k": 9.0, "tau": 225.0},
            "objects": objects
            or [
                {"name": f"robot{i}", "class_id": i, "cuboid": {"size": [0.4, 0.4, 0.4],
                 "offset": {"translation": [0, 0, 0.2]}}, "safety_radius": 0.3}
                for i in range(3)
            ],
            "camera": {**CAMERA, "pose": TOP_DOWN_POSE},
            "writers": writers if writers is not None else [{"kind": "darknet"}],
        }
        document.update(overrides)
        return write_json("random.json", document)

    return _build


def read_tree(root: Path) -> dict[str, bytes]:
    return {
        str(path.relative_to(root)): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }
