"""Console logging for the CLI."""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "robust_cic"


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """Route the package logger to stderr through rich; -v gives INFO, -vv DEBUG."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    return logger
