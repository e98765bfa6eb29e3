from __future__ import annotations

import os

from dotenv import load_dotenv

from .utils import parse_int, parse_optional_int

load_dotenv()

WORKERS = parse_optional_int(os.getenv("PSRFR_WORKERS")) or (os.cpu_count() or 1)
SEED = parse_int(os.getenv("PSRFR_SEED"), 20240601)
REPLICATES = parse_int(os.getenv("PSRFR_REPLICATES"), 1000)
SLICES = parse_int(os.getenv("PSRFR_SLICES"), 10)
OUTPUT_DIR = os.getenv("PSRFR_OUTPUT_DIR", "results").strip() or "results"
LOG_LEVEL = os.getenv("PSRFR_LOG_LEVEL", "INFO").strip() or "INFO"
LOG_FILE = os.getenv("PSRFR_LOG_FILE", "").strip()

WINE_DATA_DIR = os.getenv("WINE_DATA_DIR", "data").strip() or "data"
WINE_BASE_URL = (
    os.getenv(
        "WINE_BASE_URL",
        "https://archive.ics.uci.edu/ml/machine-learning-databases/wine-quality",
    ).strip().rstrip("/")
)
HTTP_TIMEOUT_SECONDS = parse_int(os.getenv("HTTP_TIMEOUT_SECONDS"), 20)
