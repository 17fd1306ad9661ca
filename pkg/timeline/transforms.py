"""Rigid transforms backed by scipy rotations."""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.spatial.transform import Rotation

SLERP_LINEAR_THRESHOLD = 1.0 - 1e-9


def slerp_quaternion(q0: np.ndarray, q1: np.ndarray, alpha: float) -> np.ndarray:
    """Shortest-arc spherical interpolation of unit quaternions (x, y, z, w).

    Falls back to normalized linear interpolation when the quaternions are
    nearly parallel, where sin(angle) would vanish.
    """

    q0 = np.asarray(q0, dtype=np.float64)
    q1 = np.asarray(q1, dtype=np.float64)
    dot = float(np.dot(q0, q1))
    if dot < 0.0:
        q1 = -q1
        dot = -dot

    if dot > SLERP_LINEAR_THRESHOLD:
        result = q0 + alpha * (q1 - q0)
        return result / np.linalg.norm(result)

    theta = np.arccos(min(dot, 1.0))
    sin_theta = np.sin(theta)
    w0 = np.sin((1.0 - alpha) * theta) / sin_theta
    w1 = np.sin(alpha * theta) / sin_theta
    result = w0 * q0 + w1 * q1
    return result / np.linalg.norm(result)


class Transform:
    """Rotation followed by translation: ``p' = R p + t``."""

    __slots__ = ("_translation", "_quat")

    def __init__(self, translation: Sequence[float], quaternion: Sequence[float]):
        self._translation = np.array(translation, dtype=np.float64).reshape(3)
        quat = np.array(quaternion, dtype=np.float64).reshape(4)
        norm = np.linalg.norm(quat)
        if norm == 0.0:
            raise ValueError("quaternion must be non-zero")
        self._quat = quat / norm

    @classmethod
    def identity(cls) -> "Transform":
        return cls((0.0, 0.0, 0.0), (0.0, 0.0, 0.0, 1.0))

    @classmethod
    def from_rotation(cls, translation: Sequence[float], rotation: Rotation) -> "Transform":
        return cls(translation, rotation.as_quat())

    @classmethod
    def from_xyz_rpy(
        cls, translation: Sequence[float], rpy: Sequence[float] = (0.0, 0.0, 0.0)
    ) -> "Transform":
        return cls.from_rotation(translation, Rotation.from_euler("xyz", rpy))

    @property
    def translation(self) -> np.ndarray:
        return self._translation.copy()

    @property
    def quaternion(self) -> np.ndarray:
        return self._quat.copy()

    @property
    def rotation(self) -> Rotation:
        return Rotation.from_quat(self._quat)

    def rotation_matrix(self) -> np.ndarray:
        return self.rotation.as_matrix()

    def to_matrix(self) -> np.ndarray:
        matrix = np.eye(4)
        matrix[:3, :3] = self.rotation_matrix()
        matrix[:3, 3] = self._translation
        return matrix

    def inverse(self) -> "Transform":
        inv_rotation = self.rotation.inv()
        return Transform.from_rotation(-inv_rotation.apply(self._translation), inv_rotation)

    def compose(self, other: "Transform") -> "Transform":
        """``self * other``: apply ``other`` first, then ``self``."""

        rotation = self.rotation
        return Transform.from_rotation(
            self._translation + rotation.apply(other._translation),
            rotation * other.rotation,
        )

    __mul__ = compose

    def apply(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.size == 0:
            return points.reshape(-1, 3)
        return self.rotation.apply(points) + self._translation

    def interpolate(self, other: "Transform", alpha: float) -> "Transform":
        translation = self._translation * (1.0 - alpha) + other._translation * alpha
        return Transform(translation, slerp_quaternion(self._quat, other._quat, alpha))

    def almost_equal(self, other: "Transform", atol: float = 1e-9) -> bool:
        if not np.allclose(self._translation, other._translation, atol=atol, rtol=0.0):
            return False
        return bool(
            np.allclose(self._quat, other._quat, atol=atol, rtol=0.0)
            or np.allclose(self._quat, -other._quat, atol=atol, rtol=0.0)
        )

    def __repr__(self) -> str:
        return f"Transform(translation={self._translation.tolist()}, quaternion={self._quat.tolist()})"
