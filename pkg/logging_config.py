"""
Logging configuration shared by the CLI, the HTTP service and the pipeline.

Call setup_logging() once from an entry point; library modules only call get_logger().
Records may carry ``stage``, ``seconds`` and ``count`` extras; StageTimer fills all
three for a timed pipeline stage.
"""

import logging
import sys
import time
from typing import Optional

NOISY_LOGGERS = ("httpx", "urllib3", "uvicorn.access", "sqlalchemy.engine")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(stage)s] %(message)s'


class StageFieldFilter(logging.Filter):
    """Default the stage extras so the format works for every record."""

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "stage"):
            record.stage = "-"
        if not hasattr(record, "seconds"):
            record.seconds = None
        if not hasattr(record, "count"):
            record.count = None
        return True


def setup_logging(level: str = "INFO") -> None:
    """Install a single stdout handler on the root logger."""
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(StageFieldFilter())

    root_logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    root_logger.addHandler(console_handler)

    # Silence noisy libraries
    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    logging.getLogger(__name__).debug(f"Logging configured at {level.upper()}")


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger instance"""
    return logging.getLogger(name)


class StageTimer:
    """Time one pipeline stage and log its duration and item count on exit.

        with StageTimer(logger, "pointwise", count=len(views)) as timer:
            ...
        seconds[timer.stage] = timer.seconds
    """

    def __init__(self, logger: logging.Logger, stage: str, count: Optional[int] = None):
        self.logger = logger
        self.stage = stage
        self.count = count
        self.seconds = 0.0
        self._start = 0.0

    def __enter__(self) -> "StageTimer":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.seconds = time.perf_counter() - self._start
        if exc_type is not None:
            return
        items = f" over {self.count} items" if self.count is not None else ""
        self.logger.info(
            f"⏱️ {self.stage} finished in {self.seconds:.2f}s{items}",
            extra={"stage": self.stage, "seconds": round(self.seconds, 6), "count": self.count},
        )
