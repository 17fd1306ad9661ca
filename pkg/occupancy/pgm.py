"""Netpbm graymap (PGM) parsing for occupancy-grid rasters.

Supports the binary ``P5`` and ASCII ``P2`` variants with ``maxval <= 255``.
Header comments (``#`` to end of line) are accepted anywhere in the header.
Samples are returned as a ``(height, width)`` uint8 array, top row first.
When ``maxval`` is below 255 the samples are rescaled to the full 8-bit range
so that thresholds always operate on 0..255 gray values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import MalformedHeader, TruncatedData, UnsupportedMaxval

_WHITESPACE = b" \t\r\n\x0b\x0c"


@dataclass(frozen=True)
class Raster:
    width: int
    height: int
    values: np.ndarray


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_whitespace_and_comments(self) -> None:
        data = self.data
        while self.pos < len(data):
            byte = data[self.pos : self.pos + 1]
            if byte == b"#":
                newline = data.find(b"\n", self.pos)
                self.pos = len(data) if newline < 0 else newline + 1
            elif byte in _WHITESPACE:
                self.pos += 1
            else:
                return

    def token(self, what: str) -> bytes:
        self._skip_whitespace_and_comments()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1] not in _WHITESPACE:
            if data[self.pos : self.pos + 1] == b"#":
                break
            self.pos += 1
        if start == self.pos:
            raise MalformedHeader(f"PGM header ended before {what}")
        return data[start : self.pos]

    def integer(self, what: str) -> int:
        raw = self.token(what)
        try:
            return int(raw.decode("ascii"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise MalformedHeader(f"PGM {what} is not an integer: {raw!r}") from exc


def parse_pgm(data: bytes) -> Raster:
    """Parse a complete PGM document or raise a typed error; never partial."""

    if data[:2] not in (b"P5", b"P2"):
        raise MalformedHeader(f"Unsupported PGM magic: {data[:2]!r}")
    magic = data[:2]
    reader = _HeaderReader(data)
    reader.pos = 2
    if reader.pos < len(data) and data[reader.pos : reader.pos + 1] not in _WHITESPACE + b"#":
        raise MalformedHeader("PGM magic must be followed by whitespace")

    width = reader.integer("width")
    height = reader.integer("height")
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"PGM dimensions must be positive, got {width}x{height}")
    maxval = reader.integer("maxval")
    if maxval <= 0:
        raise MalformedHeader(f"PGM maxval must be positive, got {maxval}")
    if maxval > 255:
        raise UnsupportedMaxval(f"PGM maxval {maxval} exceeds 255", maxval=maxval)

    count = width * height
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the samples.
        if reader.pos >= len(data):
            raise TruncatedData(f"PGM expected {count} samples, got 0", expected=count, actual=0)
        start = reader.pos + 1
        payload = data[start : start + count]
        if len(payload) < count:
            raise TruncatedData(
                f"PGM expected {count} samples, got {len(payload)}",
                expected=count,
                actual=len(payload),
            )
        samples = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    else:
        values: list[int] = []
        while len(values) < count:
            try:
                raw = reader.token("sample")
            except MalformedHeader:
                raise TruncatedData(
                    f"PGM expected {count} samples, got {len(values)}",
                    expected=count,
                    actual=len(values),
                ) from None
            try:
                values.append(int(raw.decode("ascii")))
            except (UnicodeDecodeError, ValueError) as exc:
                raise MalformedHeader(f"PGM sample is not an integer: {raw!r}") from exc
        samples = np.asarray(values, dtype=np.int64)

    if samples.size and (samples.min() < 0 or samples.max() > maxval):
        raise MalformedHeader(f"PGM sample outside [0, {maxval}]")
    if maxval != 255:
        samples = np.rint(samples * 255.0 / maxval).astype(np.int64)

    grid = samples.astype(np.uint8).reshape((height, width))
    return Raster(width=width, height=height, values=grid)


def read_pgm(path: str) -> Raster:
    with open(path, "rb") as handle:
        return parse_pgm(handle.read())
