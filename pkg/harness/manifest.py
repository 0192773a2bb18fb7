# File: harness/manifest.py
# Run manifests: written before any artifact, finalized afterwards

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pathway import __version__
from pathway.config import DEFAULT_CONFIG, file_sha256
from pathway.models import RunManifest, SeedSet

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def start_manifest(
    out_dir: Path,
    command: str,
    config_path: Optional[Path],
    seed_set: Optional[SeedSet] = None,
    solver: Optional[str] = None,
    solver_config: Optional[Dict[str, Any]] = None,
    options: Optional[Dict[str, Any]] = None,
    name: str = MANIFEST_NAME,
) -> Path:
    """Hash the config and write a 'running' manifest; returns its path"""
    out_dir.mkdir(parents=True, exist_ok=True)
    config_path = Path(config_path) if config_path else DEFAULT_CONFIG
    manifest = RunManifest(
        command=command,
        config_path=str(config_path),
        config_sha256=file_sha256(config_path),
        solver=solver,
        solver_config=solver_config,
        seed_set=seed_set,
        options=options or {},
        tool_version=__version__,
        started_at=datetime.now(timezone.utc),
    )
    path = out_dir / name
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Started manifest {path} (config sha256 {manifest.config_sha256[:12]})")
    return path


def finish_manifest(path: Path, artifacts: List[Path], status: str = "ok") -> RunManifest:
    manifest = RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    manifest = manifest.model_copy(update={
        "artifacts": [str(Path(a).name) for a in artifacts],
        "finished_at": datetime.now(timezone.utc),
        "status": status,
    })
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return manifest
