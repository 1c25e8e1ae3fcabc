"""Memento TimeMap parsing, archived-status decision, and snapshot deltas.

TimeMaps arrive as application/link-format text. Only RFC 1123 datetimes
are accepted; entries with other formats are skipped and counted as
warnings rather than failing the whole parse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import format_datetime, parsedate_to_datetime
from enum import Enum

from .core import CanonicalUri, canonicalize
from .errors import MismatchedOriginal, TimeMapParseError


@dataclass(frozen=True)
class Memento:
    memento_uri: CanonicalUri
    datetime: datetime
    archive_host: str


@dataclass(frozen=True)
class TimeMap:
    original: CanonicalUri
    mementos: tuple[Memento, ...]
    retrieved_at: datetime
    warnings: tuple[str, ...] = ()


class DeltaKind(Enum):
    GREW = "Grew"
    STABLE = "Stable"
    SHRANK = "Shrank"
    ONE_TO_ZERO = "OneToZero"


@dataclass(frozen=True)
class TimeMapDelta:
    old_count: int
    new_count: int
    kind: DeltaKind


def _split_outside(text: str, sep: str) -> list[tuple[int, str]]:
    """Split on sep outside <> and double quotes; return (offset, part)."""
    parts = []
    depth = 0
    quoted = False
    start = 0
    for i, ch in enumerate(text):
        if ch == '"':
            quoted = not quoted
        elif quoted:
            continue
        elif ch == "<":
            depth += 1
        elif ch == ">":
            depth = max(0, depth - 1)
        elif ch == sep and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:]))
    return parts


def _line_of(body: str, offset: int) -> int:
    return body.count("\n", 0, offset) + 1


def parse_timemap(
    body: str,
    original: CanonicalUri | str,
    retrieved_at: datetime | None = None,
) -> TimeMap:
    """Parse link-format text into a TimeMap for the given original URI.

    Mementos are sorted by datetime ascending and deduplicated by memento
    URI (earliest datetime kept).
    """
    original = canonicalize(original)
    retrieved_at = retrieved_at or datetime.now(timezone.utc)
    mementos: dict[CanonicalUri, Memento] = {}
    warnings: list[str] = []

    for offset, link_value in _split_outside(body, ","):
        if not link_value.strip():
            continue
        # point at the entry itself, not the separator before any newline
        lead = len(link_value) - len(link_value.lstrip())
        line = _line_of(body, offset + lead)
        segments = _split_outside(link_value, ";")
        target = segments[0][1].strip()
        if not (target.startswith("<") and target.endswith(">")):
            raise TimeMapParseError(f"expected <uri-reference>, got {target!r}", line)
        uri_text = target[1:-1]
        params: dict[str, str] = {}
        for _, seg in segments[1:]:
            seg = seg.strip()
            if not seg:
                continue
            if "=" not in seg:
                raise TimeMapParseError(f"malformed parameter {seg!r}", line)
            key, value = seg.split("=", 1)
            params[key.strip().lower()] = value.strip().strip('"')
        rels = params.get("rel", "").split()
        if "memento" not in rels:
            continue
        dt_text = params.get("datetime")
        if not dt_text:
            warnings.append(f"line {line}: memento without datetime skipped")
            continue
        try:
            dt = parsedate_to_datetime(dt_text)
        except (TypeError, ValueError):
            dt = None
        if dt is None:
            warnings.append(f"line {line}: unparseable datetime {dt_text!r} skipped")
            continue
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        try:
            uri = canonicalize(uri_text)
        except Exception:
            warnings.append(f"line {line}: unparseable memento URI {uri_text!r} skipped")
            continue
        existing = mementos.get(uri)
        if existing is None or dt < existing.datetime:
            mementos[uri] = Memento(memento_uri=uri, datetime=dt, archive_host=uri.host)

    ordered = tuple(sorted(mementos.values(), key=lambda m: (m.datetime, str(m.memento_uri))))
    return TimeMap(
        original=original,
        mementos=ordered,
        retrieved_at=retrieved_at,
        warnings=tuple(warnings),
    )


def serialize_timemap(tm: TimeMap) -> str:
    """Emit the TimeMap back out as application/link-format text."""
    lines = [f'<{tm.original}>; rel="original"']
    for m in tm.mementos:
        stamp = format_datetime(m.datetime, usegmt=True)
        lines.append(f'<{m.memento_uri}>; rel="memento"; datetime="{stamp}"')
    return ",\n".join(lines) + "\n"


def is_archived(tm: TimeMap) -> bool:
    """Archived means at least one publicly available memento."""
    return len(tm.mementos) >= 1


def timemap_delta(old: TimeMap, new: TimeMap) -> TimeMapDelta:
    if old.original != new.original:
        raise MismatchedOriginal(f"{old.original} != {new.original}")
    old_count = len(old.mementos)
    new_count = len(new.mementos)
    if old_count == 1 and new_count == 0:
        kind = DeltaKind.ONE_TO_ZERO
    elif new_count < old_count:
        kind = DeltaKind.SHRANK
    elif new_count > old_count:
        kind = DeltaKind.GREW
    else:
        kind = DeltaKind.STABLE
    return TimeMapDelta(old_count=old_count, new_count=new_count, kind=kind)


def snapshot_to_json(tm: TimeMap) -> dict:
    return {
        "schema_version": 1,
        "original": str(tm.original),
        "retrieved_at": tm.retrieved_at.isoformat(),
        "mementos": [
            {
                "uri": str(m.memento_uri),
                "datetime": m.datetime.isoformat(),
                "archive_host": m.archive_host,
            }
            for m in tm.mementos
        ],
        "warnings": list(tm.warnings),
    }


def snapshot_from_json(doc: dict) -> TimeMap:
    return TimeMap(
        original=canonicalize(doc["original"]),
        mementos=tuple(
            Memento(
                memento_uri=canonicalize(m["uri"]),
                datetime=datetime.fromisoformat(m["datetime"]),
                archive_host=m["archive_host"],
            )
            for m in doc["mementos"]
        ),
        retrieved_at=datetime.fromisoformat(doc["retrieved_at"]),
        warnings=tuple(doc.get("warnings", ())),
    )


def load_snapshot(path) -> TimeMap:
    with open(path, encoding="utf-8") as fh:
        return snapshot_from_json(json.load(fh))


class FixtureTimeMapSource:
    """Reads link-format TimeMaps from files named <uri_key>.link."""

    def __init__(self, directory):
        from pathlib import Path

        self._dir = Path(directory)

    def get(self, uri: CanonicalUri, retrieved_at: datetime | None = None) -> TimeMap:
        from .cache import uri_key

        path = self._dir / f"{uri_key(uri)}.link"
        body = path.read_text(encoding="utf-8") if path.is_file() else ""
        return parse_timemap(body, uri, retrieved_at=retrieved_at)


class HttpTimeMapSource:
    """Fetches TimeMaps from an aggregator endpoint URL template."""

    TEMPLATE = "{endpoint}/timemap/link/{uri}"

    def __init__(self, endpoint: str, client, timeout: float = 10.0,
                 user_agent: str = "webrot/0.1"):
        self._endpoint = endpoint.rstrip("/")
        self._client = client
        self._timeout = timeout
        self._headers = {"User-Agent": user_agent}

    def get(self, uri: CanonicalUri, retrieved_at: datetime | None = None) -> TimeMap:
        url = self.TEMPLATE.format(endpoint=self._endpoint, uri=uri)
        resp = self._client.get(url, timeout=self._timeout, headers=self._headers)
        body = resp.text if resp.status_code == 200 else ""
        return parse_timemap(body, uri, retrieved_at=retrieved_at)
