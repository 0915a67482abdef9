from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Union

from .errors import UsageError

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"

LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}


def parse_level(name: Union[str, int]) -> int:
    if isinstance(name, int):
        return name
    try:
        return LEVELS[name.upper()]
    except KeyError as exc:
        raise UsageError(f"Unknown log level {name!r}; expected one of {sorted(LEVELS)}") from exc


def configure_logging(level: Union[int, str] = logging.WARNING, log_file: Optional[Path] = None) -> None:
    """Configure root logger on stderr with optional file handler."""
    handlers = [logging.StreamHandler()]
    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=parse_level(level),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
