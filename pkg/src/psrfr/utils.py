from __future__ import annotations

import logging
import sys
from datetime import datetime, timezone
from typing import Optional

LOG_FORMAT = "[psrfr] %(message)s"


def parse_int(value: Optional[str], default: int) -> int:
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def parse_optional_int(value: Optional[str]) -> Optional[int]:
    if value is None or not value.strip():
        return None
    try:
        return int(value)
    except ValueError:
        return None


def parse_float_list(value: str) -> list[float]:
    """Parse a comma-separated list of floats, e.g. ``"1,2,3"``."""
    return [float(item) for item in value.split(",") if item.strip()]


def parse_name_list(value: str) -> list[str]:
    return [item.strip().lower() for item in value.split(",") if item.strip()]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def configure_logging(level: str = "INFO") -> None:
    root = logging.getLogger("psrfr")
    if not any(getattr(handler, "_psrfr", False) for handler in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._psrfr = True  # type: ignore[attr-defined]
        root.addHandler(handler)
    root.setLevel(getattr(logging, level.strip().upper(), logging.INFO))
