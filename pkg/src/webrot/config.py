"""Flat key-value configuration for the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError


@dataclass
class Config:
    cache_dir: str = ".webrot-cache"
    timemap_endpoint: str = "https://timetravel.mementoweb.org"
    timemap_fixture_dir: str | None = None
    social_fixture: str | None = None
    search_fixture: str | None = None
    pages_fixture: str | None = None
    stopword_file: str | None = None
    timeout: float = 10.0
    max_redirects: int = 30
    repeat_count: int = 3
    repeat_spacing: float = 0.0
    per_host_delay: float = 1.0
    soft404_threshold: float = 0.9
    similarity_threshold: float = 0.70
    corpus_limit: int = 500
    search_limit: int = 10
    min_posts: int = 30
    user_agent: str = "webrot/0.1"

    def __post_init__(self):
        if not (0 < self.similarity_threshold <= 1):
            raise ConfigError("similarity_threshold must be in (0, 1]")


_PATH_KEYS = (
    "timemap_fixture_dir",
    "social_fixture",
    "search_fixture",
    "pages_fixture",
    "stopword_file",
)


def load_config(path: str | Path | None) -> Config:
    """Load a flat JSON config document; unknown keys are errors, and all
    configured fixture paths must exist at startup."""
    if path is None:
        return Config()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a flat JSON object")
    known = {f.name for f in fields(Config)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        cfg = Config(**doc)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base = path.parent
    for key in _PATH_KEYS:
        value = getattr(cfg, key)
        if value is None:
            continue
        resolved = (base / value).resolve() if not Path(value).is_absolute() else Path(value)
        if not resolved.exists():
            raise ConfigError(f"{key} does not exist: {resolved}")
        setattr(cfg, key, str(resolved))
    return cfg
