"""
Logging setup shared by all scatter2d modules.

Set SCATTER2D_LOG_LEVEL=DEBUG (environment or .env file) for per-point output.
"""

import logging
import os
import threading

from dotenv import load_dotenv

load_dotenv()

_ROOT = "scatter2d"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_configured = False
_lock = threading.Lock()


def _configure_root() -> None:
    global _configured
    with _lock:
        if _configured:
            return
        root = logging.getLogger(_ROOT)
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        level = os.getenv("SCATTER2D_LOG_LEVEL", "WARNING").upper()
        root.setLevel(getattr(logging, level, logging.WARNING))
        root.propagate = False
        _configured = True


def get_logger(name: str) -> logging.Logger:
    """Return a logger under the ``scatter2d`` namespace.

    Args:
        name: Usually ``__name__`` of the calling module.

    Returns:
        logging.Logger: Logger sharing the package handler and level.
    """
    _configure_root()
    if name != _ROOT and not name.startswith(_ROOT + "."):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)


def set_level(level: str) -> None:
    """Change the package log level at runtime (used by the CLI)."""
    _configure_root()
    logging.getLogger(_ROOT).setLevel(getattr(logging, level.upper(), logging.WARNING))
