"""Error taxonomy shared by every stage of scene generation."""
from __future__ import annotations

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
from typing import Any


class ErrorType(StrEnum):
    """Error classification for failed operations."""

    MALFORMED_HEADER = "MALFORMED_HEADER"
    TRUNCATED_DATA = "TRUNCATED_DATA"
    UNSUPPORTED_MAXVAL = "UNSUPPORTED_MAXVAL"
    INVALID_THRESHOLDS = "INVALID_THRESHOLDS"
    OUT_OF_BOUNDS = "OUT_OF_BOUNDS"
    NO_FREE_POSE = "NO_FREE_POSE"
    MALFORMED_LINE = "MALFORMED_LINE"
    NON_UNIT_QUATERNION = "NON_UNIT_QUATERNION"
    CYCLIC_TREE = "CYCLIC_TREE"
    DUPLICATE_TIMESTAMP = "DUPLICATE_TIMESTAMP"
    EMPTY_OVERLAP = "EMPTY_OVERLAP"
    UNKNOWN_FRAME = "UNKNOWN_FRAME"
    EXTRAPOLATION_REQUIRED = "EXTRAPOLATION_REQUIRED"
    NO_PATH = "NO_PATH"
    BEHIND_CAMERA = "BEHIND_CAMERA"
    DIMENSION_MISMATCH = "DIMENSION_MISMATCH"
    MISSING_MASK = "MISSING_MASK"
    IO_FAILURE = "IO_FAILURE"
    MISSING_REQUIRED = "MISSING_REQUIRED"
    TYPE_MISMATCH = "TYPE_MISMATCH"
    UNREADABLE_FILE = "UNREADABLE_FILE"
    INVALID_CONFIG = "INVALID_CONFIG"
    INTERNAL_ERROR = "INTERNAL_ERROR"


CONFIG_ERRORS = {
    ErrorType.MISSING_REQUIRED,
    ErrorType.TYPE_MISMATCH,
    ErrorType.UNREADABLE_FILE,
    ErrorType.INVALID_CONFIG,
}

INPUT_ERRORS = {
    ErrorType.MALFORMED_HEADER,
    ErrorType.TRUNCATED_DATA,
    ErrorType.UNSUPPORTED_MAXVAL,
    ErrorType.INVALID_THRESHOLDS,
    ErrorType.MALFORMED_LINE,
    ErrorType.NON_UNIT_QUATERNION,
    ErrorType.CYCLIC_TREE,
    ErrorType.DUPLICATE_TIMESTAMP,
    ErrorType.EMPTY_OVERLAP,
    ErrorType.UNKNOWN_FRAME,
}


class SynthSceneError(Exception):
    """Base failure carrying an error category and structured context."""

    error_type: ErrorType = ErrorType.INTERNAL_ERROR

    def __init__(
        self,
        message: str,
        *,
        error_type: ErrorType | None = None,
        **context: Any,
    ):
        super().__init__(message)
        if error_type is not None:
            self.error_type = error_type
        self.context = context


class MalformedHeader(SynthSceneError):
    error_type = ErrorType.MALFORMED_HEADER


class TruncatedData(SynthSceneError):
    error_type = ErrorType.TRUNCATED_DATA


class UnsupportedMaxval(SynthSceneError):
    error_type = ErrorType.UNSUPPORTED_MAXVAL


class InvalidThresholds(SynthSceneError):
    error_type = ErrorType.INVALID_THRESHOLDS


class OutOfBounds(SynthSceneError):
    error_type = ErrorType.OUT_OF_BOUNDS


class NoFreePose(SynthSceneError):
    error_type = ErrorType.NO_FREE_POSE


class MalformedLine(SynthSceneError):
    error_type = ErrorType.MALFORMED_LINE

    def __init__(self, message: str, *, line_number: int, **context: Any):
        super().__init__(f"line {line_number}: {message}", line_number=line_number, **context)
        self.line_number = line_number


class NonUnitQuaternion(SynthSceneError):
    error_type = ErrorType.NON_UNIT_QUATERNION


class CyclicTree(SynthSceneError):
    error_type = ErrorType.CYCLIC_TREE


class DuplicateTimestamp(SynthSceneError):
    error_type = ErrorType.DUPLICATE_TIMESTAMP


class EmptyOverlap(SynthSceneError):
    error_type = ErrorType.EMPTY_OVERLAP


class UnknownFrame(SynthSceneError):
    error_type = ErrorType.UNKNOWN_FRAME


class ExtrapolationRequired(SynthSceneError):
    error_type = ErrorType.EXTRAPOLATION_REQUIRED


class NoPath(SynthSceneError):
    error_type = ErrorType.NO_PATH


class BehindCamera(SynthSceneError):
    error_type = ErrorType.BEHIND_CAMERA


class DimensionMismatch(SynthSceneError):
    error_type = ErrorType.DIMENSION_MISMATCH


class MissingMask(SynthSceneError):
    error_type = ErrorType.MISSING_MASK


class IoFailure(SynthSceneError):
    error_type = ErrorType.IO_FAILURE


class MissingRequired(SynthSceneError):
    """Raised with every missing field name, not just the first."""

    error_type = ErrorType.MISSING_REQUIRED

    def __init__(self, fields: list[str]):
        super().__init__(
            "Missing required configuration fields: " + ", ".join(fields),
            fields=fields,
        )
        self.fields = list(fields)


class TypeMismatch(SynthSceneError):
    error_type = ErrorType.TYPE_MISMATCH


class UnreadableFile(SynthSceneError):
    error_type = ErrorType.UNREADABLE_FILE


class InvalidConfig(SynthSceneError):
    error_type = ErrorType.INVALID_CONFIG


class FrameGenerationError(SynthSceneError):
    """Wraps a per-frame failure, keeping the original category."""

    def __init__(self, cause: SynthSceneError, **frame_context: Any):
        details = " ".join(f"{key}={value}" for key, value in frame_context.items())
        super().__init__(
            f"{cause} ({details})",
            error_type=cause.error_type,
            **{**cause.context, **frame_context},
        )
        self.cause = cause


def exit_code_for(error_type: ErrorType | str) -> int:
    """Map an error category onto the CLI exit status."""

    normalized = ErrorType(error_type)
    if normalized in CONFIG_ERRORS:
        return 2
    if normalized in INPUT_ERRORS:
        return 3
    if normalized == ErrorType.INTERNAL_ERROR:
        return 1
    return 4
