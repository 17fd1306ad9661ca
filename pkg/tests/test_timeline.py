import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from conftest import pose_line
from core.errors import (
    CyclicTree,
    DuplicateTimestamp,
    EmptyOverlap,
    ExtrapolationRequired,
    MalformedLine,
    NoPath,
    NonUnitQuaternion,
    UnknownFrame,
    UnreadableFile,
)
from timeline.clock import ReplayClock, sample_times
from timeline.pose_log import format_sample, load_pose_log, parse_pose_log, parse_sample
from timeline.transforms import Transform
from timeline.tree import STATIC_RANGE, lookup_transform, valid_time_range


def test_parse_and_lookup_interpolates_between_samples():
    tree = parse_pose_log(
        [
            pose_line(0.0, "world", "robot", tx=0.0),
            pose_line(2.0, "world", "robot", tx=4.0),
        ]
    )

    halfway = lookup_transform(tree, "world", "robot", 1.0)

    assert halfway.translation == pytest.approx([2.0, 0.0, 0.0])


def test_lookup_reproduces_recorded_samples_on_random_logs():
    rng = np.random.default_rng(42)
    for _ in range(50):
        times = np.sort(rng.uniform(0.0, 10.0, size=int(rng.integers(2, 8))))
        records = []
        for t in times:
            quat = Rotation.random(random_state=int(rng.integers(1 << 31))).as_quat()
            tx, ty, tz = rng.normal(size=3)
            records.append((float(t), Transform((tx, ty, tz), quat)))
        lines = [
            pose_line(t, "world", "robot", *transform.translation, q=transform.quaternion)
            for t, transform in records
        ]
        lines.append(pose_line(None, "world", "camera", tz=1.0))
        tree = parse_pose_log(lines)

        for t, transform in records:
            found = lookup_transform(tree, "world", "robot", t)
            assert np.max(np.abs(found.translation - transform.translation)) <= 1e-12
            assert found.almost_equal(transform, atol=1e-12)

        frame_rate = float(rng.uniform(1.0, 60.0))
        start, end = valid_time_range(tree, ["robot", "camera"])
        clock = ReplayClock(start_time=start, end_time=end, frame_rate=frame_rate)
        assert (start, end) == (times[0], times[-1])
        assert clock.frame_count() == math.floor((end - start) * frame_rate) + 1


def test_lookup_through_common_ancestor():
    tree = parse_pose_log(
        [
            pose_line(None, "world", "a", tx=1.0),
            pose_line(None, "world", "b", ty=2.0),
            pose_line(None, "a", "a_child", tz=3.0),
        ]
    )

    b_from_child = lookup_transform(tree, "b", "a_child", 0.0)

    assert b_from_child.translation == pytest.approx([1.0, -2.0, 3.0])
    assert lookup_transform(tree, "a", "a", 5.0).almost_equal(Transform.identity())


def test_lookup_without_connection_has_no_path():
    tree = parse_pose_log(
        [pose_line(None, "world", "a"), pose_line(None, "other_world", "b")]
    )

    with pytest.raises(NoPath):
        lookup_transform(tree, "a", "b", 0.0)
    with pytest.raises(NoPath):
        lookup_transform(tree, "a", "ghost", 0.0)


def test_lookup_outside_span_requires_extrapolation():
    tree = parse_pose_log([pose_line(1.0, "world", "r"), pose_line(2.0, "world", "r")])

    with pytest.raises(ExtrapolationRequired):
        lookup_transform(tree, "world", "r", 2.5)


def test_valid_time_range_intersects_spans():
    tree = parse_pose_log(
        [
            pose_line(0.0, "world", "a"),
            pose_line(3.0, "world", "a"),
            pose_line(1.0, "world", "b"),
            pose_line(5.0, "world", "b"),
        ]
    )

    assert valid_time_range(tree, ["a", "b"]) == (1.0, 3.0)


def test_valid_time_range_empty_overlap():
    tree = parse_pose_log(
        [
            pose_line(0.0, "world", "a"),
            pose_line(1.0, "world", "a"),
            pose_line(2.0, "world", "b"),
            pose_line(3.0, "world", "b"),
        ]
    )

    with pytest.raises(EmptyOverlap):
        valid_time_range(tree, ["a", "b"])


def test_valid_time_range_static_only_and_unknown_frame():
    tree = parse_pose_log([pose_line(None, "world", "a")])

    assert valid_time_range(tree, ["a"]) == STATIC_RANGE
    with pytest.raises(UnknownFrame):
        valid_time_range(tree, ["missing"])


def test_duplicate_timestamp_rejected():
    with pytest.raises(DuplicateTimestamp):
        parse_pose_log([pose_line(1.0, "world", "a"), pose_line(1.0, "world", "a", tx=1.0)])


def test_second_parent_rejected():
    with pytest.raises(CyclicTree):
        parse_pose_log([pose_line(None, "world", "a"), pose_line(None, "map", "a")])


def test_cycle_rejected():
    with pytest.raises(CyclicTree):
        parse_pose_log([pose_line(None, "a", "b"), pose_line(None, "b", "a")])


def test_malformed_line_reports_line_number():
    with pytest.raises(MalformedLine) as excinfo:
        parse_pose_log([pose_line(0.0, "world", "a"), "", "{not json"])

    assert excinfo.value.line_number == 3
    assert str(excinfo.value).startswith("line 3:")


def test_missing_field_is_malformed():
    with pytest.raises(MalformedLine):
        parse_sample('{"t": 0, "parent": "world", "child": "a", "tx": 0}', 1)


def test_non_unit_quaternion_rejected():
    with pytest.raises(NonUnitQuaternion):
        parse_sample(pose_line(0.0, "world", "a", q=(0.0, 0.0, 0.0, 2.0)), 1)


def test_format_sample_parses_back():
    sample = parse_sample(pose_line(None, "world", "a", tx=1.5), 1)

    again = parse_sample(format_sample(sample), 1)

    assert again.is_static
    assert again.transform.almost_equal(sample.transform)


def test_load_pose_log_missing_file(tmp_path):
    with pytest.raises(UnreadableFile):
        load_pose_log(str(tmp_path / "missing.jsonl"))


def test_load_pose_log_invalid_utf8_reports_line(tmp_path):
    path = tmp_path / "poses.jsonl"
    path.write_bytes(
        pose_line(0.0, "world", "a").encode("utf-8")
        + b'\n{"t": 1, "parent": "w\xff\xfe", "child": "a"}\n'
    )

    with pytest.raises(MalformedLine) as excinfo:
        load_pose_log(str(path))

    assert excinfo.value.line_number == 2
    assert "UTF-8" in str(excinfo.value)


def test_parse_pose_log_accepts_byte_lines():
    tree = parse_pose_log(
        [
            pose_line(0.0, "world", "robot").encode("utf-8"),
            pose_line(2.0, "world", "robot", tx=4.0).encode("utf-8"),
        ]
    )

    assert lookup_transform(tree, "world", "robot", 1.0).translation == pytest.approx([2.0, 0.0, 0.0])


def test_shuffled_log_builds_same_tree_as_sorted_log():
    rng = np.random.default_rng(5)
    children = [f"robot{i}" for i in range(5)]
    times = np.arange(2000) * 0.01
    quats = rng.normal(size=(len(children), times.size, 4))
    quats /= np.linalg.norm(quats, axis=2, keepdims=True)
    offsets = rng.uniform(-5, 5, size=(len(children), times.size, 3))
    lines = [
        pose_line(float(t), "world", child, *offsets[c, i], q=tuple(quats[c, i]))
        for c, child in enumerate(children)
        for i, t in enumerate(times)
    ]
    assert len(lines) == 10_000

    ordered = parse_pose_log(lines)
    shuffled = parse_pose_log([lines[i] for i in rng.permutation(len(lines))])

    for child in children:
        expected, actual = ordered.edge(child), shuffled.edge(child)
        assert actual.parent == expected.parent == "world"
        assert np.array_equal(actual.times, expected.times)
        assert all(a.almost_equal(b) for a, b in zip(actual.transforms, expected.transforms))
        assert len(actual.transforms) == times.size


def test_sample_times_absorb_float_error():
    clock = ReplayClock(start_time=0.0, end_time=0.3, frame_rate=10.0)

    times = sample_times(clock)

    assert len(times) == 4
    assert times[-1] == pytest.approx(0.3)
    assert times[-1] <= 0.3


def test_single_frame_clock():
    assert sample_times(ReplayClock(start_time=0.0, end_time=0.0, frame_rate=10.0)) == [0.0]
