# File: pathway/config.py
# Loading environment, tiny-instance and solver configuration files

import hashlib
import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from pathway.models import EnvConfig, SolverSettings, TinyInstance
from utils.errors import InvalidConfig

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DEFAULT_CONFIG = DATA_DIR / "default_config.json"


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON, YAML or TOML file into a dict"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidConfig(f"Cannot read config {path}: {e}") from e
    suffix = path.suffix.lower()
    try:
        if suffix in (".yaml", ".yml"):
            document = yaml.safe_load(text)
        elif suffix == ".toml":
            document = tomllib.loads(text)
        else:
            document = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError, tomllib.TOMLDecodeError) as e:
        raise InvalidConfig(f"Cannot parse config {path}: {e}") from e
    if not isinstance(document, dict):
        raise InvalidConfig(f"Config {path} must hold a mapping at the top level")
    return document


def file_sha256(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _validate(model, payload: Dict[str, Any], path: Path):
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        raise InvalidConfig(f"Invalid config {path}: {e}") from e


def load_env_config(path: Optional[Union[str, Path]] = None) -> EnvConfig:
    path = Path(path) if path else DEFAULT_CONFIG
    document = load_document(path)
    payload = {k: v for k, v in document.items() if k != "solvers"}
    config = _validate(EnvConfig, payload, path)
    logger.debug(f"Loaded environment config {path} (horizon {config.horizon})")
    return config


def load_solver_settings(path: Optional[Union[str, Path]] = None) -> SolverSettings:
    path = Path(path) if path else DEFAULT_CONFIG
    document = load_document(path)
    return _validate(SolverSettings, document.get("solvers") or {}, path)


def load_tiny_instance(path: Union[str, Path]) -> TinyInstance:
    path = Path(path)
    return _validate(TinyInstance, load_document(path), path)
