"""Persistence layer for the optional run ledger."""

from storage.db import Base, get_engine, get_session_factory, init_db
from storage.models import Run, RunEvent, RunEventType, RunStatus
from storage.repositories import RunEventRepository, RunRepository

__all__ = [
    "Base",
    "get_engine",
    "get_session_factory",
    "init_db",
    "Run",
    "RunEvent",
    "RunEventType",
    "RunStatus",
    "RunEventRepository",
    "RunRepository",
]
