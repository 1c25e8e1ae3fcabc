"""On-disk cache: content-addressed by canonical URI hash, one
subdirectory per record type, guarded by an advisory lock so a single
process owns the directory."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from filelock import FileLock, Timeout

from .core import CanonicalUri
from .errors import CacheLocked

SUBDIRS = ("probes", "timemaps", "corpora", "reports")


def uri_key(uri: CanonicalUri | str) -> str:
    return hashlib.sha256(str(uri).encode("utf-8")).hexdigest()[:16]


class Cache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        for sub in SUBDIRS:
            (self.root / sub).mkdir(exist_ok=True)
        self._lock = FileLock(self.root / "lock")

    def acquire(self) -> None:
        try:
            self._lock.acquire(timeout=0)
        except Timeout:
            raise CacheLocked(str(self.root)) from None

    def release(self) -> None:
        if self._lock.is_locked:
            self._lock.release()

    def __enter__(self) -> "Cache":
        self.acquire()
        return self

    def __exit__(self, *exc) -> None:
        self.release()

    def path_for(self, kind: str, uri: CanonicalUri | str, suffix: str = ".json") -> Path:
        if kind not in SUBDIRS:
            raise ValueError(f"unknown record type {kind!r}")
        return self.root / kind / f"{uri_key(uri)}{suffix}"

    def append_jsonl(self, kind: str, uri: CanonicalUri | str, record: dict) -> Path:
        path = self.path_for(kind, uri, suffix=".jsonl")
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")
        return path

    def write_json(self, kind: str, uri: CanonicalUri | str, record: dict, suffix: str = ".json") -> Path:
        path = self.path_for(kind, uri, suffix=suffix)
        path.write_text(json.dumps(record, indent=2), encoding="utf-8")
        return path
