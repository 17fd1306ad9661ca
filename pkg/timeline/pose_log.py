"""JSON Lines pose log reader.

Each non-empty line is one transform sample::

    {"t": 0.5, "parent": "world", "child": "robot1",
     "tx": 1.0, "ty": 2.0, "tz": 0.0, "qx": 0, "qy": 0, "qz": 0, "qw": 1}

``t`` may be ``null`` (optionally with ``"static": true``) for transforms that
never change. Unknown fields are ignored. Lines may appear in any time order.
"""
from __future__ import annotations

import json
import logging
import math
from typing import Any, Iterable

import numpy as np

from core.errors import MalformedLine, NonUnitQuaternion, UnreadableFile
from core.logging_utils import get_logger, log_with_context
from timeline.transforms import Transform
from timeline.tree import TimelineSample, TransformTree

logger = get_logger(__name__)

QUATERNION_TOLERANCE = 1e-3
_NUMBER_FIELDS = ("tx", "ty", "tz", "qx", "qy", "qz", "qw")


def _number(record: dict[str, Any], key: str, line_number: int) -> float:
    if key not in record:
        raise MalformedLine(f"missing field '{key}'", line_number=line_number)
    value = record[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedLine(f"field '{key}' must be a number", line_number=line_number)
    value = float(value)
    if not math.isfinite(value):
        raise MalformedLine(f"field '{key}' must be finite", line_number=line_number)
    return value


def _frame(record: dict[str, Any], key: str, line_number: int) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value:
        raise MalformedLine(f"field '{key}' must be a non-empty string", line_number=line_number)
    return value


def parse_sample(line: str, line_number: int) -> TimelineSample:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"invalid JSON: {exc.msg}", line_number=line_number) from exc
    if not isinstance(record, dict):
        raise MalformedLine("expected a JSON object", line_number=line_number)

    parent = _frame(record, "parent", line_number)
    child = _frame(record, "child", line_number)
    if parent == child:
        raise MalformedLine(f"frame '{parent}' cannot be its own parent", line_number=line_number)

    if "t" not in record:
        raise MalformedLine("missing field 't'", line_number=line_number)
    static = record.get("static", False)
    if not isinstance(static, bool):
        raise MalformedLine("field 'static' must be a boolean", line_number=line_number)
    t_raw = record["t"]
    if t_raw is None:
        t = None
    else:
        if static:
            raise MalformedLine("static samples must have t = null", line_number=line_number)
        t = _number(record, "t", line_number)
        if t < 0:
            raise MalformedLine("field 't' must be non-negative", line_number=line_number)

    values = {key: _number(record, key, line_number) for key in _NUMBER_FIELDS}
    quat = np.array([values["qx"], values["qy"], values["qz"], values["qw"]])
    norm = float(np.linalg.norm(quat))
    if abs(norm - 1.0) > QUATERNION_TOLERANCE:
        raise NonUnitQuaternion(
            f"line {line_number}: quaternion norm {norm:.6f} is not unit",
            line_number=line_number,
            norm=norm,
        )

    transform = Transform((values["tx"], values["ty"], values["tz"]), quat)
    return TimelineSample(t=t, parent=parent, child=child, transform=transform)


def parse_pose_log(lines: Iterable[str | bytes]) -> TransformTree:
    """Build the transform tree; byte lines are decoded as UTF-8 one at a time."""

    samples: list[TimelineSample] = []
    for line_number, line in enumerate(lines, start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise MalformedLine(f"invalid UTF-8: {exc.reason}", line_number=line_number) from exc
        if not line.strip():
            continue
        samples.append(parse_sample(line, line_number))

    tree = TransformTree.from_samples(samples)
    log_with_context(
        logger,
        logging.INFO,
        "Parsed pose log",
        stage="TIMELINE",
        samples=len(samples),
        edges=len(tree.edges()),
        frames=len(tree.frames),
    )
    return tree


def load_pose_log(path: str) -> TransformTree:
    try:
        with open(path, "rb") as handle:
            return parse_pose_log(handle)
    except OSError as exc:
        raise UnreadableFile(f"Cannot read pose log {path}: {exc}", path=path) from exc


def format_sample(sample: TimelineSample) -> str:
    """Serialize one sample as a pose-log line (no trailing newline)."""

    tx, ty, tz = sample.transform.translation.tolist()
    qx, qy, qz, qw = sample.transform.quaternion.tolist()
    record: dict[str, Any] = {"t": sample.t, "parent": sample.parent, "child": sample.child}
    if sample.t is None:
        record["static"] = True
    record.update({"tx": tx, "ty": ty, "tz": tz, "qx": qx, "qy": qy, "qz": qz, "qw": qw})
    return json.dumps(record)
