"""Settings management for environment-driven configuration."""
import os
from dataclasses import dataclass
from typing import Mapping, Optional

LOG_LEVELS = {"error", "warn", "info", "debug"}


@dataclass
class Settings:
    """Runtime configuration loaded from environment variables."""

    log_level: str = "info"
    log_file: Optional[str] = None
    db_path: Optional[str] = None
    raster_workers: int = 1


def _get_level(value: Optional[str], default: str = "info") -> str:
    if value is None:
        return default
    normalized = value.strip().lower()
    if normalized == "warning":
        normalized = "warn"
    return normalized if normalized in LOG_LEVELS else default


def _get_positive_int(value: Optional[str], default: int) -> int:
    if value is None:
        return default
    try:
        parsed = int(value)
    except (TypeError, ValueError):
        return default
    return parsed if parsed > 0 else default


def _get_optional_path(value: Optional[str]) -> Optional[str]:
    if value is None or not value.strip():
        return None
    return value.strip()


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    """Load settings from environment variables, falling back on bad values."""

    env = os.environ if environ is None else environ
    return Settings(
        log_level=_get_level(env.get("SYNTHSCENE_LOG")),
        log_file=_get_optional_path(env.get("SYNTHSCENE_LOG_FILE")),
        db_path=_get_optional_path(env.get("SYNTHSCENE_DB")),
        raster_workers=_get_positive_int(env.get("SYNTHSCENE_RASTER_WORKERS"), 1),
    )
