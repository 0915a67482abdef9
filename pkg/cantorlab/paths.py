from __future__ import annotations

from pathlib import Path


def repo_root() -> Path:
    """Return repository root inferred from this file location."""
    return Path(__file__).resolve().parents[1]


def config_dir() -> Path:
    return repo_root() / "config"


def default_config_path() -> Path:
    """Run and suite defaults shipped with the repository."""
    return config_dir() / "defaults.yml"
