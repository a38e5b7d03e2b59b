# relay-kit/src/relay_kit/toolkit/observability.py

import logging
import sys
from typing import TYPE_CHECKING, Optional

import structlog

if TYPE_CHECKING:
    from ..schemas.context import AnalysisContext


def configure_logging(level: str = "WARNING", fmt: str = "console") -> None:
    """
    Routes all structlog output to stderr at the given level.

    stdout is reserved for command payloads, which must stay byte-identical
    across runs, so nothing is ever logged there.
    """
    renderer = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level.upper())
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(context: Optional["AnalysisContext"] = None, **kwargs):
    """
    Returns a structlog logger pre-bound with the run's trace fields if available.

    Safe to call without a context, in which case only `kwargs` are bound.
    """
    log = structlog.get_logger()

    if context is not None and hasattr(context, "run_id"):
        bindings = {"run_id": context.run_id, "command": context.command}
        if context.network_hash:
            bindings["network_hash"] = context.network_hash
        log = log.bind(**bindings)

    if kwargs:
        log = log.bind(**kwargs)

    return log
