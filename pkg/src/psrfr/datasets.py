from __future__ import annotations

import logging
from pathlib import Path

import requests

from .config import HTTP_TIMEOUT_SECONDS, WINE_BASE_URL, WINE_DATA_DIR
from .errors import ConfigInvalid, IoError

logger = logging.getLogger(__name__)

WINE_COLORS = ("red", "white")
WINE_DELIMITER = ";"
WINE_RESPONSE = "quality"


def wine_filename(color: str) -> str:
    return f"winequality-{color}.csv"


def fetch_wine(
    color: str,
    out_dir: str | Path = WINE_DATA_DIR,
    base_url: str = WINE_BASE_URL,
    timeout: int = HTTP_TIMEOUT_SECONDS,
    force: bool = False,
) -> Path:
    """Download one UCI wine-quality file; an existing copy is reused unless ``force``."""
    color = color.strip().lower()
    if color not in WINE_COLORS:
        raise ConfigInvalid(f"unknown wine color {color!r}; expected one of {', '.join(WINE_COLORS)}")
    target = Path(out_dir) / wine_filename(color)
    if target.exists() and not force:
        logger.info("reusing %s", target)
        return target

    url = f"{base_url.rstrip('/')}/{wine_filename(color)}"
    try:
        response = requests.get(url, timeout=timeout)
        response.raise_for_status()
    except requests.RequestException as exc:
        raise IoError(f"download of {url} failed: {exc}") from exc
    logger.info("downloaded %s: status=%s bytes=%d", url, response.status_code, len(response.content))

    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(response.content)
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc
    return target
