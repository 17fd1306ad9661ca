"""Run status transitions and lifecycle logging for the ledger."""
from __future__ import annotations

import logging
from datetime import datetime
from typing import Any, Mapping

from sqlalchemy.orm import Session

from core.errors import ErrorType
from core.logging_utils import get_logger, log_with_context
from storage.models import Run, RunEventType, RunStatus
from storage.repositories import RunEventRepository

logger = get_logger(__name__)


class InvalidStatusTransition(Exception):
    """Raised when an illegal status transition is attempted."""


ALLOWED_TRANSITIONS: dict[RunStatus, set[RunStatus]] = {
    RunStatus.RUNNING: {RunStatus.COMPLETED, RunStatus.FAILED},
    RunStatus.COMPLETED: set(),
    RunStatus.FAILED: set(),
}

_EVENT_FOR_STATUS = {
    RunStatus.COMPLETED: RunEventType.COMPLETED,
    RunStatus.FAILED: RunEventType.FAILED,
}


def _normalize_status(status: RunStatus | str) -> RunStatus:
    return status if isinstance(status, RunStatus) else RunStatus(status)


def transition_status(
    session: Session,
    run: Run,
    to_status: RunStatus,
    *,
    metadata: Mapping[str, Any] | None = None,
    error_type: ErrorType | str | None = None,
    error_message: str | None = None,
) -> Run:
    """Move a run to a terminal status, recording an event."""

    current_status = _normalize_status(run.status)
    new_status = _normalize_status(to_status)

    if new_status not in ALLOWED_TRANSITIONS.get(current_status, set()):
        log_with_context(
            logger,
            logging.ERROR,
            "Invalid status transition attempted",
            stage="LEDGER",
            run_id=run.id,
            old_status=current_status.value,
            new_status=new_status.value,
        )
        raise InvalidStatusTransition(
            f"Cannot transition run {run.id} from {current_status.value} to {new_status.value}"
        )

    run.status = new_status.value
    if error_type is not None:
        run.error_type = ErrorType(error_type).value
    if error_message is not None:
        run.error_message = error_message
    run.updated_at = datetime.utcnow()

    data = dict(metadata or {})
    if error_type is not None:
        data["error_type"] = ErrorType(error_type).value
    RunEventRepository(session).add_event(
        run_id=run.id,
        event_type=_EVENT_FOR_STATUS[new_status],
        data=data,
        commit=False,
    )

    session.add(run)
    session.commit()
    session.refresh(run)

    log_with_context(
        logger,
        logging.INFO,
        "Run status changed",
        stage="LEDGER",
        run_id=run.id,
        old_status=current_status.value,
        new_status=new_status.value,
        error_type=run.error_type,
    )
    return run


def mark_run_completed(
    session: Session, run: Run, *, metadata: Mapping[str, Any] | None = None
) -> Run:
    return transition_status(session, run, RunStatus.COMPLETED, metadata=metadata)


def mark_run_failed(
    session: Session,
    run: Run,
    *,
    metadata: Mapping[str, Any] | None = None,
    error_type: ErrorType | str | None = None,
    error_message: str | None = None,
) -> Run:
    return transition_status(
        session,
        run,
        RunStatus.FAILED,
        metadata=metadata,
        error_type=error_type,
        error_message=error_message,
    )
