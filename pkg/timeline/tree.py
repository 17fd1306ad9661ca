"""Transform tree built from recorded samples, with interpolated lookups."""
from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from core.errors import (
    CyclicTree,
    DuplicateTimestamp,
    EmptyOverlap,
    ExtrapolationRequired,
    NoPath,
    UnknownFrame,
)
from core.logging_utils import get_logger, log_with_context
from timeline.transforms import Transform

logger = get_logger(__name__)

# Returned by valid_time_range when no dynamic edge constrains the replay.
STATIC_RANGE = (0.0, 0.0)


@dataclass(frozen=True)
class TimelineSample:
    t: Optional[float]
    parent: str
    child: str
    transform: Transform

    @property
    def is_static(self) -> bool:
        return self.t is None

    def __post_init__(self) -> None:
        if not self.parent or not self.child:
            raise ValueError("frame names must be non-empty")
        if self.parent == self.child:
            raise ValueError(f"frame '{self.parent}' cannot be its own parent")


@dataclass
class EdgeBuffer:
    """Samples of one parent -> child edge; either static or time-sorted."""

    parent: str
    child: str
    static: Optional[Transform] = None
    times: list[float] = field(default_factory=list)
    transforms: list[Transform] = field(default_factory=list)

    @property
    def is_static(self) -> bool:
        return self.static is not None

    @property
    def span(self) -> Optional[tuple[float, float]]:
        if self.is_static:
            return None
        return self.times[0], self.times[-1]

    def value_at(self, t: float) -> Transform:
        if self.static is not None:
            return self.static
        if t < self.times[0] or t > self.times[-1]:
            raise ExtrapolationRequired(
                f"Edge {self.parent}->{self.child} has no data at t={t} "
                f"(span {self.times[0]}..{self.times[-1]})",
                parent=self.parent,
                child=self.child,
                t=t,
            )
        index = bisect.bisect_left(self.times, t)
        if self.times[index] == t:
            return self.transforms[index]
        t0, t1 = self.times[index - 1], self.times[index]
        alpha = (t - t0) / (t1 - t0)
        return self.transforms[index - 1].interpolate(self.transforms[index], alpha)


class TransformTree:
    """Forest of frames; each child frame has exactly one parent edge."""

    def __init__(self, edges: dict[str, EdgeBuffer]):
        self._edges = edges
        self._frames = set(edges) | {edge.parent for edge in edges.values()}

    @classmethod
    def from_samples(cls, samples: Iterable[TimelineSample]) -> "TransformTree":
        grouped: dict[str, EdgeBuffer] = {}
        timed: dict[str, list[tuple[float, Transform]]] = {}

        for sample in samples:
            edge = grouped.get(sample.child)
            if edge is None:
                edge = EdgeBuffer(parent=sample.parent, child=sample.child)
                grouped[sample.child] = edge
                timed[sample.child] = []
            elif edge.parent != sample.parent:
                raise CyclicTree(
                    f"Frame '{sample.child}' has two parents "
                    f"('{edge.parent}' and '{sample.parent}')",
                    child=sample.child,
                )

            if sample.is_static:
                if edge.static is not None or timed[sample.child]:
                    raise DuplicateTimestamp(
                        f"Static edge {sample.parent}->{sample.child} has more than one sample",
                        child=sample.child,
                    )
                edge.static = sample.transform
            else:
                if edge.static is not None:
                    raise DuplicateTimestamp(
                        f"Edge {sample.parent}->{sample.child} mixes static and timed samples",
                        child=sample.child,
                    )
                timed[sample.child].append((float(sample.t), sample.transform))  # type: ignore[arg-type]

        for child, entries in timed.items():
            if not entries:
                continue
            entries.sort(key=lambda entry: entry[0])
            edge = grouped[child]
            for (t_prev, _), (t_next, _) in zip(entries, entries[1:]):
                if t_prev == t_next:
                    raise DuplicateTimestamp(
                        f"Edge {edge.parent}->{child} has two samples at t={t_next}",
                        child=child,
                        t=t_next,
                    )
            edge.times = [entry[0] for entry in entries]
            edge.transforms = [entry[1] for entry in entries]

        tree = cls(grouped)
        tree._check_acyclic()
        return tree

    def _check_acyclic(self) -> None:
        for frame in self._edges:
            seen = {frame}
            current = frame
            while current in self._edges:
                current = self._edges[current].parent
                if current in seen:
                    raise CyclicTree(f"Frame graph contains a cycle through '{frame}'", frame=frame)
                seen.add(current)

    @property
    def frames(self) -> set[str]:
        return set(self._frames)

    def edges(self) -> list[EdgeBuffer]:
        return [self._edges[child] for child in sorted(self._edges)]

    def edge(self, child: str) -> Optional[EdgeBuffer]:
        return self._edges.get(child)

    def has_frame(self, frame: str) -> bool:
        return frame in self._frames

    def path_to_root(self, frame: str) -> list[EdgeBuffer]:
        """Edges from ``frame`` upwards, nearest first."""

        path: list[EdgeBuffer] = []
        current = frame
        while current in self._edges:
            edge = self._edges[current]
            path.append(edge)
            current = edge.parent
        return path

    def root_of(self, frame: str) -> str:
        path = self.path_to_root(frame)
        return path[-1].parent if path else frame


def valid_time_range(tree: TransformTree, required_frames: Iterable[str]) -> tuple[float, float]:
    """Window in which every required frame can be looked up without extrapolation.

    Static-only inputs return STATIC_RANGE, meaning a single frame at t=0.
    """

    starts: list[float] = []
    ends: list[float] = []
    for frame in required_frames:
        if not tree.has_frame(frame):
            raise UnknownFrame(f"Frame '{frame}' does not appear in the pose log", frame=frame)
        for edge in tree.path_to_root(frame):
            span = edge.span
            if span is not None:
                starts.append(span[0])
                ends.append(span[1])

    if not starts:
        return STATIC_RANGE

    start, end = max(starts), min(ends)
    if start > end:
        raise EmptyOverlap(
            f"Required frames share no common time window ({start} > {end})",
            start=start,
            end=end,
        )
    log_with_context(
        logger, logging.DEBUG, "Computed valid time range", stage="TIMELINE", start=start, end=end
    )
    return start, end


def _chain(edges: list[EdgeBuffer], t: float) -> Optional[Transform]:
    # edges are ordered from the ancestor downwards.
    result: Optional[Transform] = None
    for edge in edges:
        value = edge.value_at(t)
        result = value if result is None else result.compose(value)
    return result


def lookup_transform(tree: TransformTree, target: str, source: str, t: float) -> Transform:
    """Transform taking points in ``source`` coordinates into ``target`` coordinates."""

    if target == source:
        return Transform.identity()
    for frame in (target, source):
        if not tree.has_frame(frame):
            raise NoPath(f"Frame '{frame}' does not appear in the pose log", frame=frame)

    target_path = tree.path_to_root(target)
    source_path = tree.path_to_root(source)
    target_ancestors = [target] + [edge.parent for edge in target_path]
    source_ancestors = [source] + [edge.parent for edge in source_path]
    common = next((frame for frame in source_ancestors if frame in set(target_ancestors)), None)
    if common is None:
        raise NoPath(f"No path between '{target}' and '{source}'", target=target, source=source)

    down_to_source = list(reversed(source_path[: source_ancestors.index(common)]))
    down_to_target = list(reversed(target_path[: target_ancestors.index(common)]))

    common_to_source = _chain(down_to_source, t)
    common_to_target = _chain(down_to_target, t)

    if common_to_target is None:
        return common_to_source if common_to_source is not None else Transform.identity()
    target_from_common = common_to_target.inverse()
    if common_to_source is None:
        return target_from_common
    return target_from_common.compose(common_to_source)
