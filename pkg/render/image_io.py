"""Frame and mask buffers plus their Netpbm encodings."""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from core.errors import IoFailure


@dataclass(frozen=True)
class Frame:
    """RGB image, ``rgb`` has shape (height, width, 3) and dtype uint8."""

    width: int
    height: int
    rgb: np.ndarray

    def __post_init__(self) -> None:
        if self.rgb.shape != (self.height, self.width, 3):
            raise ValueError(f"rgb shape {self.rgb.shape} does not match {self.width}x{self.height}")


@dataclass(frozen=True)
class Mask:
    """Boolean pixel mask, ``bits`` has shape (height, width)."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        if self.bits.shape != (self.height, self.width):
            raise ValueError(f"mask shape {self.bits.shape} does not match {self.width}x{self.height}")

    @classmethod
    def empty(cls, width: int, height: int) -> "Mask":
        return cls(width=width, height=height, bits=np.zeros((height, width), dtype=bool))

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))


def write_ppm(frame: Frame, path: str) -> None:
    """Binary P6, maxval 255."""

    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        Image.fromarray(np.ascontiguousarray(frame.rgb, dtype=np.uint8)).save(path, format="PPM")
    except OSError as exc:
        raise IoFailure(f"Cannot write frame {path}: {exc}", path=path) from exc


def write_mask_pgm(mask: Mask, path: str) -> None:
    """Binary P5: 0 background, 255 object."""

    gray = np.where(mask.bits, 255, 0).astype(np.uint8)
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        Image.fromarray(gray).save(path, format="PPM")
    except OSError as exc:
        raise IoFailure(f"Cannot write mask {path}: {exc}", path=path) from exc


def read_ppm(path: str) -> Frame:
    with Image.open(path) as image:
        rgb = np.array(image.convert("RGB"), dtype=np.uint8)
    height, width, _ = rgb.shape
    return Frame(width=width, height=height, rgb=rgb)
