"""
Spike Forecaster - Command Line Entry Point

Parser construction, logging setup and the mapping from application
errors to process exit codes (0 ok, 1 usage, 2 data, 3 runtime).
"""

import argparse
import logging
import sys
from typing import Any, Optional, Sequence

import orjson
import structlog

from app.config import get_settings
from app.exceptions import AppError, UsageError

logger = structlog.get_logger(__name__)


def configure_logging(level: str = "INFO", json_logs: bool = False) -> None:
    """Route structlog through stdlib logging to stderr."""
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level.upper(), force=True)
    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
    ]
    if json_logs:
        processors += [structlog.processors.format_exc_info, structlog.processors.JSONRenderer()]
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))
    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as exceptions."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _add_global_flags(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument("--config", default=default, help="Run config JSON file")
    parser.add_argument("--seed", type=int, default=default, help="Root seed for every random stream")
    parser.add_argument("--jobs", type=int, default=default, help="Worker process cap")
    parser.add_argument("--out", default=default, help="Output directory")
    parser.add_argument("--log-level", default=default, help="DEBUG, INFO, WARNING or ERROR")


def build_parser() -> CliParser:
    from commands import COMMANDS

    parser = CliParser(prog="spike-forecaster", description="SNN price-spike forecasting toolkit")
    _add_global_flags(parser, None)

    # flags may also follow the subcommand without resetting earlier values
    shared = CliParser(add_help=False)
    _add_global_flags(shared, argparse.SUPPRESS)

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for command in COMMANDS:
        command.register(subparsers, [shared])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = get_settings()
        configure_logging(args.log_level or settings.log_level, settings.log_json)
        logger.debug("Running command", command=args.command)
        return int(args.handler(args))
    except AppError as e:
        print(f"error: {e.message}", file=sys.stderr)
        if e.details:
            print(orjson.dumps(e.details, default=str).decode(), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("Unhandled exception", error=str(e))
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
