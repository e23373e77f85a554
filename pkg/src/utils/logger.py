"""
Logging setup

All pipeline progress goes to stderr so that reports on stdout stay
machine-readable. Level is read from SLC_LOG_LEVEL (default INFO).
"""

import logging
import os
import sys

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_configured = False


def _configure_root() -> None:
    global _configured
    if _configured:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    root = logging.getLogger("slc")
    root.addHandler(handler)
    try:
        root.setLevel(os.getenv("SLC_LOG_LEVEL", "INFO").upper())
    except ValueError:
        root.setLevel(logging.INFO)
    root.propagate = False
    _configured = True


def get_logger(name: str) -> logging.Logger:
    """Get a namespaced logger (slc.<name>) with the shared stderr handler"""
    _configure_root()
    return logging.getLogger(f"slc.{name}")


def set_level(level: str) -> None:
    _configure_root()
    logging.getLogger("slc").setLevel(level.upper())
