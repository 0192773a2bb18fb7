# File: utils/settings.py
# Process settings read from the environment (optionally from a .env file)

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv


def _get_env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class Settings:
    output_dir: Path
    log_level: str
    max_workers: int


def get_settings(load_env_file: bool = False) -> Settings:
    if load_env_file:
        load_dotenv()
    return Settings(
        output_dir=Path(os.getenv("PTNZ_OUTPUT_DIR", "./runs")),
        log_level=os.getenv("PTNZ_LOG_LEVEL", "INFO"),
        max_workers=max(1, _get_env_int("PTNZ_MAX_WORKERS", 4)),
    )
