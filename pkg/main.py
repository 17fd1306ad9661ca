"""Main entrypoint for the synthetic dataset generator."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from config.run_config import Mode, load_config
from config.settings import load_settings
from core.errors import ErrorType, SynthSceneError, exit_code_for
from core.logging_utils import configure_logging, get_logger
from pipeline.service import dry_run_frame_count, generate
from storage.db import get_engine, get_session_factory, init_db


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synthscene",
        description="Render labeled synthetic images from a pose log or an occupancy map.",
    )
    parser.add_argument("--config", required=True, help="Path to the JSON run configuration")
    parser.add_argument("--mode", choices=[mode.value for mode in Mode], help="Override the config mode")
    parser.add_argument("--output", help="Override output_dir")
    parser.add_argument("--seed", type=int, help="Override the seed")
    parser.add_argument(
        "--dry-run",
        action="store_true",
        help="Validate inputs and print the frame count without writing anything",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the generator and map failures to exit codes."""

    args = build_parser().parse_args(argv)
    settings = load_settings()
    configure_logging(settings)
    logger = get_logger(__name__)

    logger.info(
        "Settings loaded log_level=%s log_file=%s db_path=%s raster_workers=%s",
        settings.log_level,
        settings.log_file,
        settings.db_path,
        settings.raster_workers,
    )

    try:
        config = load_config(args.config, mode_override=args.mode)
        if args.output:
            config.output_dir = args.output
        if args.seed is not None:
            config.seed = args.seed

        if args.dry_run:
            print(dry_run_frame_count(config))
            return 0

        session_factory = None
        if settings.db_path:
            engine = get_engine(settings)
            init_db(engine)
            session_factory = get_session_factory(engine)

        report = generate(config, settings, session_factory=session_factory)
    except SynthSceneError as exc:
        logger.error("Generation failed error_type=%s message=%s", exc.error_type.value, exc)
        print(f"error_type={exc.error_type.value} {exc}", file=sys.stderr)
        return exit_code_for(exc.error_type)
    except Exception as exc:  # pragma: no cover - last-resort guard
        logger.exception("Unexpected failure")
        print(f"error_type={ErrorType.INTERNAL_ERROR.value} {exc}", file=sys.stderr)
        return exit_code_for(ErrorType.INTERNAL_ERROR)

    logger.info(
        "Run finished frames=%s files=%s wall_time_s=%.2f subtractor_invocations=%s",
        report.frames,
        report.files_per_writer,
        report.wall_time_s,
        report.subtractor_invocations,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
