from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from .errors import MalformedInputError, UsageError
from .paths import default_config_path

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "text", "dot")


@dataclass(frozen=True)
class SuiteSizes:
    metric_samples: int = 500
    formal_samples: int = 200
    construction_schedules: int = 50
    baire_instances: int = 20
    kernel_samples: int = 100


@dataclass(frozen=True)
class RunConfig:
    """Resolution bounds and seed shared by every command."""

    depth: int = 4
    k_bound: int = 2
    lookahead: Optional[int] = None
    budget: int = 64
    seed: int = 20240601
    format: str = "json"
    suites: SuiteSizes = field(default_factory=SuiteSizes)

    def __post_init__(self) -> None:
        for name in ("depth", "k_bound", "budget"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise UsageError(f"{name} must be a positive integer, got {value!r}")
        if self.lookahead is not None and (not isinstance(self.lookahead, int) or self.lookahead < 0):
            raise UsageError(f"lookahead must be a non-negative integer or null, got {self.lookahead!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise UsageError(f"seed must be an integer, got {self.seed!r}")
        if self.format not in FORMATS:
            raise UsageError(f"Unknown format {self.format!r}; expected one of {FORMATS}")
        for f in fields(self.suites):
            value = getattr(self.suites, f.name)
            if not isinstance(value, int) or value < 1:
                raise UsageError(f"suites.{f.name} must be a positive integer, got {value!r}")

    @property
    def effective_lookahead(self) -> int:
        return 2 * self.depth if self.lookahead is None else self.lookahead

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["effective_lookahead"] = self.effective_lookahead
        return data


def _candidate_paths() -> list[Path]:
    return [default_config_path()]


def _read_yaml(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise MalformedInputError(f"Invalid YAML in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInputError(f"Config file {path} must hold a mapping, got {type(data).__name__}")
    return data


def load_run_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Load run defaults from YAML, then apply overrides (e.g., CLI flags).

    Expected layout:
        run:    depth / k_bound / lookahead / budget / seed / format
        suites: metric_samples / formal_samples / construction_schedules / ...
    Without an explicit path, config/defaults.yml is used when present and the
    built-in defaults otherwise. Overrides whose value is None are ignored.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise UsageError(f"Config file not found: {path}")
        data = _read_yaml(path)
        logger.info("Loaded run config from %s", path)
    else:
        for candidate in _candidate_paths():
            if candidate.exists():
                data = _read_yaml(candidate)
                logger.info("Loaded run config from %s", candidate)
                break
        else:
            logger.info("No config file found; using built-in defaults")

    run = dict(data.get("run") or {})
    suites = dict(data.get("suites") or {})
    known_run = {f.name for f in fields(RunConfig)} - {"suites"}
    known_suites = {f.name for f in fields(SuiteSizes)}
    unknown = sorted(set(run) - known_run) + sorted(f"suites.{k}" for k in set(suites) - known_suites)
    if unknown:
        raise UsageError(f"Unknown config keys: {unknown}")

    config = RunConfig(**run, suites=SuiteSizes(**suites))
    if overrides:
        changes = {k: v for k, v in overrides.items() if v is not None}
        bad = sorted(set(changes) - known_run)
        if bad:
            raise UsageError(f"Unknown config overrides: {bad}")
        config = replace(config, **changes)
    return config
