#!/usr/bin/env python
"""
Per-stage logging for scenic-rating.

Every module logs through a child of the scenic-rating logger named after its pipeline
stage, e.g. scenic-rating.trees or scenic-rating.evaluation. The handlers stamp each
record with its stage, which the detailed and debug formats print. SCENIC_LOG_STAGES
narrows the output to a comma-separated list of stages; warnings and errors of every
stage are always shown.

Records go to stderr so that command results printed on stdout stay machine readable.
"""

import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import FrozenSet, Iterator, List, Optional

from scenic_rating.core.env_fetcher import EnvFetcher

ROOT_LOGGER_NAME = "scenic-rating"

# Pipeline stages first, then the command and infrastructure layers.
STAGES = (
    "ingest",
    "features",
    "sampling",
    "trees",
    "ensemble",
    "evaluation",
    "serialization",
    "run",
    "cli",
    "config",
    "io",
    "plugins",
)

FORMATS = {
    "simple": "%(levelname)s: %(message)s",
    "detailed": "%(asctime)s - %(stage)s - %(levelname)s - %(message)s",
    "debug": "%(asctime)s - %(stage)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s",
}


def stage_of(logger_name: str) -> str:
    """Stage a logger name belongs to, or "-" for the root logger and foreign names."""
    prefix = ROOT_LOGGER_NAME + "."
    if not logger_name.startswith(prefix):
        return "-"
    return logger_name[len(prefix) :].split(".", 1)[0]


class StageFilter(logging.Filter):
    """Sets record.stage and, with a selection, drops info and debug records of other stages."""

    def __init__(self, stages: Optional[FrozenSet[str]] = None):
        super().__init__()
        self.stages = stages

    def filter(self, record: logging.LogRecord) -> bool:
        record.stage = stage_of(record.name)
        if self.stages is None or record.levelno >= logging.WARNING:
            return True
        return record.stage in self.stages


def parse_stages(raw: str) -> Optional[FrozenSet[str]]:
    """Comma-separated stage names to a set; an empty value selects every stage."""
    names = frozenset(part.strip().lower() for part in raw.split(",") if part.strip())
    return names or None


class ScenicLogger:
    """Configures the scenic-rating logger once from the environment."""

    _configured: bool = False

    @classmethod
    def get_logger(cls, name: str = ROOT_LOGGER_NAME) -> logging.Logger:
        """
        Get a logger, configuring logging on first use.

        Arguments:
            name: Full logger name (default: scenic-rating)

        Returns:
            logging.Logger: The logger
        """
        if not cls._configured:
            cls._configure_logging()

        return logging.getLogger(name)

    @classmethod
    def _configure_logging(cls) -> None:
        if cls._configured:
            return

        level_name = EnvFetcher.get("SCENIC_LOG_LEVEL", default="WARNING") or "WARNING"
        level = getattr(logging, level_name.upper(), logging.WARNING)
        log_file = EnvFetcher.get("SCENIC_LOG_FILE", default="")
        format_name = EnvFetcher.get("SCENIC_LOG_FORMAT", default="simple")
        stages = parse_stages(EnvFetcher.get("SCENIC_LOG_STAGES", default=""))

        formatter = logging.Formatter(FORMATS.get(format_name, FORMATS["simple"]), datefmt="%Y-%m-%d %H:%M:%S")
        stage_filter = StageFilter(stages)

        root_logger = logging.getLogger(ROOT_LOGGER_NAME)
        root_logger.setLevel(level)
        root_logger.handlers.clear()

        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        file_error: Optional[OSError] = None
        if log_file:
            try:
                Path(log_file).parent.mkdir(parents=True, exist_ok=True)
                handlers.append(logging.FileHandler(log_file))
            except OSError as e:
                file_error = e

        for handler in handlers:
            handler.setLevel(level)
            handler.setFormatter(formatter)
            handler.addFilter(stage_filter)
            root_logger.addHandler(handler)
        cls._configured = True

        if file_error is not None:
            root_logger.warning("Failed to create log file %s: %s", log_file, file_error)
        unknown = sorted((stages or frozenset()) - set(STAGES))
        if unknown:
            root_logger.warning("Ignoring unknown log stages: %s", ", ".join(unknown))
        root_logger.debug("Logging configured: level=%s, format=%s, stages=%s", level_name, format_name, stages)

    @classmethod
    def reset(cls) -> None:
        """Forget the configuration (tests)."""
        cls._configured = False
        logging.getLogger(ROOT_LOGGER_NAME).handlers.clear()


def get_logger(stage: Optional[str] = None) -> logging.Logger:
    """
    Logger of a pipeline stage.

    Arguments:
        stage: One of STAGES; None gives the scenic-rating logger itself

    Returns:
        logging.Logger: scenic-rating.<stage>

    Raises:
        ValueError: For a stage outside STAGES
    """
    if stage is None:
        return ScenicLogger.get_logger(ROOT_LOGGER_NAME)
    if stage not in STAGES:
        raise ValueError(f"unknown logging stage {stage!r}; expected one of {', '.join(STAGES)}")
    return ScenicLogger.get_logger(f"{ROOT_LOGGER_NAME}.{stage}")


@contextmanager
def log_duration(logger: logging.Logger, what: str) -> Iterator[None]:
    """Log at info level how long the block took, also when it raises."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.info("%s took %.3fs", what, time.perf_counter() - start)
