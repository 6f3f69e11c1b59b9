"""Process-level settings for the CLI and the service.

Only process concerns (log level, worker count) come from the environment.
Experiment parameters always come from the scenario file.
"""
import logging
import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def log_level() -> str:
    return os.getenv("LOG_LEVEL", "INFO").strip().upper()


def max_workers() -> int:
    raw = os.getenv("SIM_MAX_WORKERS", "1").strip()
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def configure_logging(level: Optional[str] = None) -> None:
    """Install one stream handler on the root logger (idempotent)."""
    root = logging.getLogger()
    if not any(getattr(h, "_sim_handler", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._sim_handler = True
        root.addHandler(handler)
    root.setLevel(level or log_level())
