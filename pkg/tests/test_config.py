import numpy as np
import pytest

from config.run_config import Mode, load_config, parse_config
from config.settings import load_settings
from conftest import CAMERA, TOP_DOWN_POSE
from core.errors import InvalidConfig, MissingRequired, TypeMismatch, UnreadableFile


def _minimal_replay(**overrides):
    document = {
        "mode": "replay",
        "pose_log_path": "poses.jsonl",
        "objects": [{"name": "robot1", "class_id": 1, "cuboid": {"size": [1, 1, 1]}}],
        "camera": {**CAMERA, "frame": "camera"},
        "writers": [{"kind": "darknet"}],
    }
    document.update(overrides)
    return document


def test_minimal_replay_uses_defaults_and_warns():
    config = parse_config(_minimal_replay())

    assert config.mode is Mode.REPLAY
    assert config.frame_rate == 10.0
    assert config.seed == 0
    assert config.noise_sigma == 0.0
    assert config.output_dir == "output"
    assert config.segmentation.num_bg_frames == 10
    assert config.segmentation.k == 9.0
    assert config.segmentation.tau == 225.0
    assert config.objects[0].class_name == "robot1"
    assert config.objects[0].safety_radius is None
    assert config.camera.pose is None and config.camera.frame == "camera"
    defaulted = [w for w in config.warnings if w.startswith("Optional parameter unspecified")]
    assert any("field=frame_rate" in w for w in defaulted)
    assert any("field=segmentation.tau" in w for w in defaulted)


def test_missing_objects_is_reported():
    document = _minimal_replay()
    del document["objects"]

    with pytest.raises(MissingRequired) as excinfo:
        parse_config(document)

    assert excinfo.value.fields == ["objects"]


def test_all_missing_fields_reported_together():
    document = _minimal_replay(objects=[{"name": "robot1"}])
    del document["pose_log_path"]
    document["camera"] = {"fx": 100.0}

    with pytest.raises(MissingRequired) as excinfo:
        parse_config(document)

    fields = excinfo.value.fields
    assert "pose_log_path" in fields
    assert "objects[0].class_id" in fields
    assert "objects[0].cuboid" in fields
    assert "camera.height" in fields
    assert "camera.pose|camera.frame" in fields


def test_missing_mode():
    document = _minimal_replay()
    del document["mode"]

    with pytest.raises(MissingRequired) as excinfo:
        parse_config(document)

    assert "mode" in excinfo.value.fields
    assert parse_config(document, mode_override="replay").mode is Mode.REPLAY


def test_unknown_key_is_warned_not_fatal():
    config = parse_config(_minimal_replay(frmae_rate=30))

    assert config.frame_rate == 10.0
    assert any("Unknown configuration keys ignored" in w and "frmae_rate" in w for w in config.warnings)


@pytest.mark.parametrize(
    "overrides",
    [
        {"frame_rate": "fast"},
        {"seed": 1.5},
        {"noise_sigma": True},
        {"objects": "robot1"},
        {"writers": [{"kind": 3}]},
    ],
)
def test_type_mismatch(overrides):
    with pytest.raises(TypeMismatch):
        parse_config(_minimal_replay(**overrides))


@pytest.mark.parametrize(
    "overrides",
    [
        {"writers": []},
        {"objects": []},
        {"frame_rate": 0},
        {"mode": "sideways"},
        {
            "objects": [
                {"name": "twin", "class_id": 1, "cuboid": {"size": [1, 1, 1]}},
                {"name": "twin", "class_id": 2, "cuboid": {"size": [1, 1, 1]}},
            ]
        },
        {"objects": [{"name": "flat", "class_id": 1, "cuboid": {"size": [1, 0, 1]}}]},
    ],
)
def test_invalid_config(overrides):
    with pytest.raises(InvalidConfig):
        parse_config(_minimal_replay(**overrides))


def test_random_mode_requires_map_count_radius_and_pose():
    document = {
        "mode": "random",
        "objects": [{"name": "robot1", "class_id": 1, "cuboid": {"size": [1, 1, 1]}}],
        "camera": dict(CAMERA),
        "writers": [{"kind": "darknet"}],
    }

    with pytest.raises(MissingRequired) as excinfo:
        parse_config(document)

    assert set(excinfo.value.fields) == {
        "map_path",
        "frame_count",
        "objects[0].safety_radius",
        "camera.pose",
    }


def test_random_mode_parses_pose_literal_and_keypoints():
    document = {
        "mode": "random",
        "map_path": "map.json",
        "frame_count": 4,
        "objects": [
            {"name": "robot1", "class_id": 1, "cuboid": {"size": [1, 1, 1]},
             "safety_radius": 0.5, "keypoints": [[0, 0, 0], [0.5, 0, 0]]}
        ],
        "camera": {**CAMERA, "pose": TOP_DOWN_POSE},
        "writers": [{"kind": "keypoints"}],
    }

    config = parse_config(document)

    assert config.frame_count == 4
    assert config.objects[0].safety_radius == 0.5
    assert config.objects[0].keypoints.shape == (2, 3)
    assert np.allclose(config.camera.pose.translation, [2.5, 2.5, 6.0])
    assert not any("field=frame_rate" in w for w in config.warnings)


def test_keypoints_writer_warns_for_objects_without_keypoints():
    config = parse_config(_minimal_replay(writers=[{"kind": "keypoints"}]))

    assert any("no keypoints" in w and "object=robot1" in w for w in config.warnings)


def test_load_config_unreadable(tmp_path):
    with pytest.raises(UnreadableFile):
        load_config(str(tmp_path / "missing.json"))

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(UnreadableFile):
        load_config(str(broken))


def test_load_config_invalid_utf8(tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"mode": "replay", "output_dir": "caf\xe9"}')

    with pytest.raises(UnreadableFile) as excinfo:
        load_config(str(path))

    assert excinfo.value.context["path"] == str(path)


def test_load_config_records_path(write_json):
    path = write_json("config.json", _minimal_replay())

    assert load_config(path).config_path == path


def test_settings_from_environment():
    settings = load_settings(
        {
            "SYNTHSCENE_LOG": "WARNING",
            "SYNTHSCENE_DB": " /tmp/runs.db ",
            "SYNTHSCENE_RASTER_WORKERS": "4",
        }
    )

    assert settings.log_level == "warn"
    assert settings.db_path == "/tmp/runs.db"
    assert settings.raster_workers == 4
    assert settings.log_file is None


def test_settings_fall_back_on_bad_values():
    settings = load_settings({"SYNTHSCENE_LOG": "chatty", "SYNTHSCENE_RASTER_WORKERS": "-2", "SYNTHSCENE_DB": ""})

    assert settings.log_level == "info"
    assert settings.raster_workers == 1
    assert settings.db_path is None
