"""Entry points used by the CLI: dispatch, dry runs and ledger bookkeeping."""
from __future__ import annotations

import logging
from typing import Optional

from sqlalchemy.orm import Session, sessionmaker

from config.run_config import Config, Mode
from config.settings import Settings
from core.errors import ErrorType, SynthSceneError
from core.logging_utils import get_logger, log_with_context
from core.state_machine import mark_run_completed, mark_run_failed
from pipeline.random_mode import load_random_map, run_random
from pipeline.replay import load_replay_tree, plan_replay, run_replay
from pipeline.runner import RunReport
from storage.models import Run, RunEventType
from storage.repositories import RunEventRepository, RunRepository

logger = get_logger(__name__)


def dry_run_frame_count(config: Config) -> int:
    """Validate inputs and count frames without writing anything."""

    if config.mode == Mode.REPLAY:
        return len(plan_replay(config, load_replay_tree(config)))
    load_random_map(config)
    return int(config.frame_count or 0)


class RunLedger:
    """Records one run in the SQLite ledger; a no-op without a session factory."""

    def __init__(self, session_factory: Optional[sessionmaker[Session]]):
        self.session_factory = session_factory
        self.run_id: Optional[int] = None

    def start(self, config: Config) -> None:
        if self.session_factory is None:
            return
        with self.session_factory() as session:
            run = RunRepository(session).create_run(
                mode=config.mode.value,
                output_dir=config.output_dir,
                seed=config.seed,
                config_path=config.config_path,
            )
            RunEventRepository(session).add_event(
                run_id=run.id,
                event_type=RunEventType.STARTED,
                data={"writers": [writer.kind for writer in config.writers]},
            )
            self.run_id = run.id

    def progress(self, percent: int) -> None:
        if self.session_factory is None or self.run_id is None:
            return
        with self.session_factory() as session:
            RunEventRepository(session).add_event(
                run_id=self.run_id, event_type=RunEventType.PROGRESS, data={"percent": percent}
            )

    def _load(self, session: Session) -> Optional[Run]:
        return RunRepository(session).get_by_id(self.run_id) if self.run_id is not None else None

    def completed(self, report: RunReport) -> None:
        if self.session_factory is None:
            return
        with self.session_factory() as session:
            run = self._load(session)
            if run is None:
                return
            events = RunEventRepository(session)
            for kind, files in sorted(report.files_per_writer.items()):
                events.add_event(
                    run_id=run.id,
                    event_type=RunEventType.WRITER_FINALIZED,
                    data={"kind": kind, "files": files},
                    commit=False,
                )
            run.frames_generated = report.frames
            run.subtractor_invocations = report.subtractor_invocations
            run.wall_time_s = report.wall_time_s
            mark_run_completed(session, run, metadata={"frames": report.frames})

    def failed(self, error_type: ErrorType | str, message: str) -> None:
        if self.session_factory is None:
            return
        with self.session_factory() as session:
            run = self._load(session)
            if run is not None:
                mark_run_failed(session, run, error_type=error_type, error_message=message)


def generate(
    config: Config,
    settings: Optional[Settings] = None,
    *,
    session_factory: Optional[sessionmaker[Session]] = None,
) -> RunReport:
    """Run the loop selected by ``config.mode``, recording the outcome."""

    settings = settings or Settings()
    ledger = RunLedger(session_factory)
    ledger.start(config)
    runner = run_replay if config.mode == Mode.REPLAY else run_random
    try:
        report = runner(config, settings, progress_callback=ledger.progress)
    except SynthSceneError as exc:
        ledger.failed(exc.error_type, str(exc))
        raise
    except Exception as exc:
        log_with_context(logger, logging.ERROR, "Unexpected generation failure", stage="PIPELINE")
        ledger.failed(ErrorType.INTERNAL_ERROR, str(exc))
        raise
    ledger.completed(report)
    return report
