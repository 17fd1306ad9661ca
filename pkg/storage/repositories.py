"""Repository helpers for the run ledger."""
from __future__ import annotations

from enum import Enum
from typing import Any, Mapping, Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from storage.models import Run, RunEvent, RunEventType, RunStatus


def _enum_value(value: str | Enum | None) -> Optional[str]:
    """Return the string value for enum members while allowing raw strings."""

    if value is None:
        return None
    return value.value if isinstance(value, Enum) else value


class RunRepository:
    """CRUD operations for Run entities."""

    def __init__(self, session: Session):
        self.session = session

    def create_run(
        self,
        *,
        mode: str,
        output_dir: str,
        seed: int,
        config_path: Optional[str] = None,
        commit: bool = True,
    ) -> Run:
        run = Run(
            mode=mode,
            output_dir=output_dir,
            seed=seed,
            config_path=config_path,
            status=RunStatus.RUNNING.value,
        )
        self.session.add(run)
        if commit:
            self.session.commit()
            self.session.refresh(run)
        else:
            self.session.flush()
        return run

    def get_by_id(self, run_id: int) -> Optional[Run]:
        return self.session.get(Run, run_id)

    def list_recent(self, limit: int = 10) -> list[Run]:
        stmt = select(Run).order_by(Run.created_at.desc(), Run.id.desc()).limit(limit)
        return list(self.session.scalars(stmt))

    def list_by_status(self, status: RunStatus | str, limit: int = 100) -> list[Run]:
        stmt = (
            select(Run)
            .where(Run.status == _enum_value(status))
            .order_by(Run.id.asc())
            .limit(limit)
        )
        return list(self.session.scalars(stmt))


class RunEventRepository:
    """Append-only access to RunEvent rows."""

    def __init__(self, session: Session):
        self.session = session

    def add_event(
        self,
        *,
        run_id: int,
        event_type: RunEventType | str,
        data: Mapping[str, Any] | None = None,
        commit: bool = True,
    ) -> RunEvent:
        event = RunEvent(run_id=run_id, event_type=_enum_value(event_type), data=dict(data or {}))
        self.session.add(event)
        if commit:
            self.session.commit()
            self.session.refresh(event)
        else:
            self.session.flush()
        return event

    def list_for_run(self, run_id: int, limit: int = 100) -> list[RunEvent]:
        stmt = (
            select(RunEvent)
            .where(RunEvent.run_id == run_id)
            .order_by(RunEvent.id.asc())
            .limit(limit)
        )
        return list(self.session.scalars(stmt))
