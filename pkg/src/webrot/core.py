"""Canonical URI handling and the four-way resource status taxonomy.

Canonicalization rules (ours; pinned, configuration-stable):
lowercase scheme and host, default port elided, fragment stripped,
dot-segments resolved, percent-escapes uppercased, empty path -> "/".
Query strings are preserved verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlsplit

from .errors import MalformedUri, UnsupportedScheme

_DEFAULT_PORTS = {"http": 80, "https": 443}
_PCT_RE = re.compile(r"%([0-9a-fA-F]{2})")


@dataclass(frozen=True)
class CanonicalUri:
    scheme: str
    host: str
    port: int | None
    path: str
    query: str

    def __str__(self) -> str:
        netloc = self.host if self.port is None else f"{self.host}:{self.port}"
        q = f"?{self.query}" if self.query else ""
        return f"{self.scheme}://{netloc}{self.path}{q}"


class ResourceStatus(Enum):
    REPLICATED = "Replicated"
    VULNERABLE = "Vulnerable"
    ENDANGERED = "Endangered"
    UNRECOVERABLE = "Unrecoverable"


class Liveness(Enum):
    LIVE = "Live"
    MISSING = "Missing"
    UNCERTAIN = "Uncertain"


class VerdictReason(Enum):
    OK = "Ok"
    HARD_ERROR = "HardError"
    SOFT404 = "Soft404"
    NETWORK_FAILURE = "NetworkFailure"
    MIXED = "Mixed"


@dataclass(frozen=True)
class LivenessVerdict:
    value: Liveness
    reason: VerdictReason
    detail: str | None = None

    def __post_init__(self):
        if self.value is Liveness.LIVE and self.reason is not VerdictReason.OK:
            raise ValueError("Live verdict requires reason Ok")
        if self.value is Liveness.MISSING and self.reason not in (
            VerdictReason.HARD_ERROR,
            VerdictReason.SOFT404,
        ):
            raise ValueError("Missing verdict requires HardError or Soft404")


def _remove_dot_segments(path: str) -> str:
    # RFC 3986 section 5.2.4
    output: list[str] = []
    while path:
        if path.startswith("../"):
            path = path[3:]
        elif path.startswith("./"):
            path = path[2:]
        elif path.startswith("/./"):
            path = "/" + path[3:]
        elif path == "/.":
            path = "/"
        elif path.startswith("/../"):
            path = "/" + path[4:]
            if output:
                output.pop()
        elif path == "/..":
            path = "/"
            if output:
                output.pop()
        elif path in (".", ".."):
            path = ""
        else:
            i = path.find("/", 1) if path.startswith("/") else path.find("/")
            if i == -1:
                output.append(path)
                path = ""
            else:
                output.append(path[:i])
                path = path[i:]
    return "".join(output)


def canonicalize(raw: str | CanonicalUri) -> CanonicalUri:
    """Parse and normalize an absolute http(s) URI.

    Idempotent: canonicalize(str(canonicalize(u))) == canonicalize(u).
    """
    if isinstance(raw, CanonicalUri):
        return raw
    if not isinstance(raw, str) or not raw.strip():
        raise MalformedUri(repr(raw))
    raw = raw.strip()
    try:
        parts = urlsplit(raw)
    except ValueError as exc:
        raise MalformedUri(f"{raw!r}: {exc}") from exc
    if not parts.scheme:
        raise MalformedUri(f"{raw!r}: missing scheme")
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise UnsupportedScheme(scheme)
    host = (parts.hostname or "").lower()
    if not host:
        raise MalformedUri(f"{raw!r}: missing host")
    try:
        port = parts.port
    except ValueError as exc:
        raise MalformedUri(f"{raw!r}: bad port") from exc
    if port == _DEFAULT_PORTS[scheme]:
        port = None
    path = _remove_dot_segments(parts.path) or "/"
    path = _PCT_RE.sub(lambda m: "%" + m.group(1).upper(), path)
    return CanonicalUri(scheme=scheme, host=host, port=port, path=path, query=parts.query)


def classify_status(live: bool, archived: bool) -> ResourceStatus:
    """Map the (live, archived) pair onto the 2x2 status taxonomy."""
    if live:
        return ResourceStatus.REPLICATED if archived else ResourceStatus.VULNERABLE
    return ResourceStatus.ENDANGERED if archived else ResourceStatus.UNRECOVERABLE
