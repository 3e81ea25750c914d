"""Structured logging configuration with loguru."""

import sys
from contextlib import contextmanager
from contextvars import ContextVar
from pathlib import Path
from typing import Iterator, Optional

from loguru import logger

# The running check; read when each record is emitted, not when a logger is made
check_id_var: ContextVar[Optional[str]] = ContextVar('check_id', default=None)
seed_var: ContextVar[Optional[int]] = ContextVar('seed', default=None)


def _with_check_context(record) -> None:
    record["extra"]["check_id"] = check_id_var.get()
    record["extra"]["seed"] = seed_var.get()


def configure_logging(
    level: str = "INFO",
    log_file: Optional[Path] = None,
    structured: bool = True,
    rotation: str = "50 MB",
    retention: str = "2 weeks"
):
    """Configure loguru sinks; structured output appends the bound extras."""

    logger.remove()

    if structured:
        log_format = (
            "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
            "<level>{message}</level> | "
            "{extra}"
        )
    else:
        log_format = (
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<level>{message}</level>"
        )

    logger.add(
        sys.stderr,
        format=log_format,
        level=level,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )

    if log_file:
        logger.add(
            log_file,
            format=log_format,
            level=level,
            rotation=rotation,
            retention=retention,
            compression="zip",
            backtrace=True,
            diagnose=False,
            enqueue=True,  # worker processes share the sink
        )

    logger.debug(f"Logging configured at level {level}")


def get_logger(name: str):
    """Logger tagged with ``module``; ``check_id`` and ``seed`` come from the active check."""
    return logger.patch(_with_check_context).bind(module=name)


@contextmanager
def check_context(check_id: str, seed: Optional[int] = None) -> Iterator[None]:
    """Tag every record logged inside the block with ``check_id`` and ``seed``."""
    check_token = check_id_var.set(check_id)
    seed_token = seed_var.set(seed)
    try:
        yield
    finally:
        check_id_var.reset(check_token)
        seed_var.reset(seed_token)
