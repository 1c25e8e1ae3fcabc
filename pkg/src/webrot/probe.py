"""Live-web probing: redirect-following fetches, soft-404 detection by
random-sibling comparison, and transient-error suppression via repeated
probes with a majority vote.

Only a terminal 200 (that also survives the soft-404 check) counts as
Live. 429 is treated as a transient network condition, all other non-200
terminals as Missing.
"""

from __future__ import annotations

import json
import random
import string
import threading
import time
import zlib
from collections import Counter
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Callable, Protocol

import requests

from .core import (
    CanonicalUri,
    Liveness,
    LivenessVerdict,
    VerdictReason,
    canonicalize,
)
from .errors import EmptyInput, OfflineViolation

Clock = Callable[[], datetime]


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class ProbePolicy:
    timeout: float = 10.0
    max_redirects: int = 30
    repeat_count: int = 3
    repeat_spacing: float = 0.0
    per_host_delay: float = 1.0
    soft404_threshold: float = 0.9
    user_agent: str = "webrot/0.1"

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not (1 <= self.max_redirects <= 30):
            raise ValueError("max_redirects must be in 1..30")
        if self.repeat_count < 1 or self.repeat_count % 2 == 0:
            raise ValueError("repeat_count must be odd and >= 1")


@dataclass(frozen=True)
class HttpResponse:
    status_code: int
    headers: dict[str, str]
    text: str


class HttpClient(Protocol):
    def get(self, url: str, timeout: float, headers: dict[str, str]) -> HttpResponse:
        """Fetch url WITHOUT following redirects."""


class RequestsClient:
    """Default client backed by a shared requests session."""

    def __init__(self):
        self._session = requests.Session()

    def get(self, url: str, timeout: float, headers: dict[str, str]) -> HttpResponse:
        resp = self._session.get(
            url, timeout=timeout, headers=headers, allow_redirects=False
        )
        return HttpResponse(
            status_code=resp.status_code,
            headers=dict(resp.headers),
            text=resp.text,
        )


class OfflineClient:
    """Client for --offline runs: any fetch attempt is a violation."""

    def get(self, url: str, timeout: float, headers: dict[str, str]) -> HttpResponse:
        raise OfflineViolation(url)


def body_fingerprint(text: str, shingle_size: int = 4) -> frozenset[int]:
    """Hashes of word shingles, for order-insensitive body comparison."""
    words = text.split()
    if not words:
        return frozenset()
    if len(words) < shingle_size:
        return frozenset({zlib.crc32(" ".join(words).encode("utf-8"))})
    return frozenset(
        zlib.crc32(" ".join(words[i : i + shingle_size]).encode("utf-8"))
        for i in range(len(words) - shingle_size + 1)
    )


def jaccard(a: frozenset[int], b: frozenset[int]) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


@dataclass(frozen=True)
class ProbeResult:
    uri: CanonicalUri
    final_uri: CanonicalUri
    status_code: int | None
    redirect_chain: tuple[tuple[str, int], ...]
    body_fingerprint: frozenset[int]
    fetched_at: datetime
    verdict: LivenessVerdict
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "uri": str(self.uri),
            "final_uri": str(self.final_uri),
            "status_code": self.status_code,
            "redirect_chain": [[u, s] for u, s in self.redirect_chain],
            "body_fingerprint": sorted(self.body_fingerprint),
            "fetched_at": self.fetched_at.isoformat(),
            "verdict": self.verdict.value.value,
            "reason": self.verdict.reason.value,
            "detail": self.verdict.detail,
            "notes": list(self.notes),
        }


def result_from_json(doc: dict) -> ProbeResult:
    return ProbeResult(
        uri=canonicalize(doc["uri"]),
        final_uri=canonicalize(doc["final_uri"]),
        status_code=doc["status_code"],
        redirect_chain=tuple((u, s) for u, s in doc["redirect_chain"]),
        body_fingerprint=frozenset(doc["body_fingerprint"]),
        fetched_at=datetime.fromisoformat(doc["fetched_at"]),
        verdict=LivenessVerdict(
            value=Liveness(doc["verdict"]),
            reason=VerdictReason(doc["reason"]),
            detail=doc.get("detail"),
        ),
        notes=tuple(doc.get("notes", ())),
    )


def _status_class(code: int) -> str:
    return f"{code // 100}xx"


def probe(
    uri: CanonicalUri | str,
    policy: ProbePolicy,
    client: HttpClient,
    clock: Clock = _utc_now,
) -> ProbeResult:
    """Follow redirects to termination and map the terminal response to a
    liveness verdict. Network failures are recorded, never raised."""
    uri = canonicalize(uri)
    headers = {"User-Agent": policy.user_agent}
    chain: list[tuple[str, int]] = []
    current = uri
    fingerprint: frozenset[int] = frozenset()
    status: int | None = None
    notes: list[str] = []

    for _ in range(policy.max_redirects + 1):
        try:
            resp = client.get(str(current), timeout=policy.timeout, headers=headers)
        except OfflineViolation:
            raise
        except Exception as exc:
            verdict = LivenessVerdict(
                Liveness.UNCERTAIN, VerdictReason.NETWORK_FAILURE, detail=type(exc).__name__
            )
            return ProbeResult(
                uri=uri,
                final_uri=current,
                status_code=None,
                redirect_chain=tuple(chain),
                body_fingerprint=frozenset(),
                fetched_at=clock(),
                verdict=verdict,
                notes=(str(exc),),
            )
        status = resp.status_code
        if 300 <= status < 400 and "Location" in resp.headers:
            chain.append((str(current), status))
            try:
                from urllib.parse import urljoin

                current = canonicalize(urljoin(str(current), resp.headers["Location"]))
            except Exception as exc:
                verdict = LivenessVerdict(
                    Liveness.MISSING, VerdictReason.HARD_ERROR, detail="bad-redirect"
                )
                return ProbeResult(
                    uri=uri,
                    final_uri=current,
                    status_code=status,
                    redirect_chain=tuple(chain),
                    body_fingerprint=frozenset(),
                    fetched_at=clock(),
                    verdict=verdict,
                    notes=(str(exc),),
                )
            continue
        fingerprint = body_fingerprint(resp.text)
        break
    else:
        # redirect budget exhausted
        verdict = LivenessVerdict(
            Liveness.MISSING, VerdictReason.HARD_ERROR, detail="redirect-limit"
        )
        return ProbeResult(
            uri=uri,
            final_uri=current,
            status_code=status,
            redirect_chain=tuple(chain[: policy.max_redirects]),
            body_fingerprint=frozenset(),
            fetched_at=clock(),
            verdict=verdict,
        )

    if status == 200:
        verdict = LivenessVerdict(Liveness.LIVE, VerdictReason.OK)
    elif status == 429:
        verdict = LivenessVerdict(
            Liveness.UNCERTAIN, VerdictReason.NETWORK_FAILURE, detail="429"
        )
    else:
        verdict = LivenessVerdict(
            Liveness.MISSING, VerdictReason.HARD_ERROR, detail=_status_class(status)
        )
    return ProbeResult(
        uri=uri,
        final_uri=current,
        status_code=status,
        redirect_chain=tuple(chain),
        body_fingerprint=fingerprint,
        fetched_at=clock(),
        verdict=verdict,
        notes=tuple(notes),
    )


def _random_sibling(uri: CanonicalUri, rng: random.Random) -> CanonicalUri:
    token = "".join(rng.choices(string.ascii_lowercase + string.digits, k=24))
    return replace(uri, path=f"/{token}", query="")


def detect_soft404(
    target: ProbeResult,
    policy: ProbePolicy,
    client: HttpClient,
    rng: random.Random | None = None,
    clock: Clock = _utc_now,
) -> bool:
    """True when a random sibling path on the same host behaves like the
    target: 200 with near-identical body, or both land on one final URI.

    A sibling fetch failure returns False: missing evidence never condemns.
    """
    if target.verdict.value is not Liveness.LIVE:
        return False
    rng = rng or random.Random()
    sibling_uri = _random_sibling(target.uri, rng)
    sibling = probe(sibling_uri, policy, client, clock=clock)
    if sibling.verdict.reason is VerdictReason.NETWORK_FAILURE:
        return False
    if target.redirect_chain and sibling.redirect_chain:
        if target.final_uri == sibling.final_uri:
            return True
    if sibling.status_code == 200:
        similarity = jaccard(target.body_fingerprint, sibling.body_fingerprint)
        if similarity >= policy.soft404_threshold:
            return True
    return False


def assess(
    uri: CanonicalUri | str,
    policy: ProbePolicy,
    client: HttpClient,
    rng: random.Random | None = None,
    clock: Clock = _utc_now,
) -> ProbeResult:
    """Probe once and apply the soft-404 check to candidate-Live results."""
    result = probe(uri, policy, client, clock=clock)
    if result.verdict.value is Liveness.LIVE:
        if detect_soft404(result, policy, client, rng=rng, clock=clock):
            result = replace(
                result,
                verdict=LivenessVerdict(Liveness.MISSING, VerdictReason.SOFT404),
                notes=result.notes + ("soft-404 sibling match",),
            )
    return result


def stable_verdict(results: list[ProbeResult]) -> LivenessVerdict:
    """Majority vote over repeated probes; Uncertain results abstain."""
    if not results:
        raise EmptyInput("no probe results")
    votes = Counter(
        r.verdict.value for r in results if r.verdict.value is not Liveness.UNCERTAIN
    )
    if not votes:
        return LivenessVerdict(Liveness.UNCERTAIN, VerdictReason.MIXED)
    top = max(votes.values())
    leaders = [v for v, n in votes.items() if n == top]
    if len(leaders) > 1:
        return LivenessVerdict(Liveness.UNCERTAIN, VerdictReason.MIXED)
    winner = leaders[0]
    # deterministic regardless of input order: most common reason, then name
    reasons = Counter(
        r.verdict.reason for r in results if r.verdict.value is winner
    )
    reason = min(reasons, key=lambda rs: (-reasons[rs], rs.value))
    return LivenessVerdict(winner, reason)


def probe_stable(
    uri: CanonicalUri | str,
    policy: ProbePolicy,
    client: HttpClient,
    rng: random.Random | None = None,
    clock: Clock = _utc_now,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[LivenessVerdict, list[ProbeResult]]:
    """Run repeat_count assessments with the configured spacing."""
    results = []
    for i in range(policy.repeat_count):
        if i and policy.repeat_spacing:
            sleep(policy.repeat_spacing)
        results.append(assess(uri, policy, client, rng=rng, clock=clock))
    return stable_verdict(results), results


class HostThrottle:
    """Serializes requests per host with a politeness delay."""

    def __init__(self, delay: float):
        self._delay = delay
        self._locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}
        self._guard = threading.Lock()

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    def wait(self, host: str, sleep: Callable[[float], None] = time.sleep) -> None:
        with self._lock_for(host):
            now = time.monotonic()
            last = self._last.get(host)
            if last is not None and now - last < self._delay:
                sleep(self._delay - (now - last))
            self._last[host] = time.monotonic()


def probe_many(
    uris: list[CanonicalUri | str],
    policy: ProbePolicy,
    client: HttpClient,
    max_workers: int = 8,
    rng: random.Random | None = None,
    clock: Clock = _utc_now,
) -> list[tuple[LivenessVerdict, list[ProbeResult]]]:
    """Probe many URIs concurrently across hosts, politely per host."""
    from concurrent.futures import ThreadPoolExecutor

    throttle = HostThrottle(policy.per_host_delay)

    def work(raw):
        uri = canonicalize(raw)
        throttle.wait(uri.host)
        return probe_stable(uri, policy, client, rng=rng, clock=clock)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(work, uris))


def write_results_jsonl(results: list[ProbeResult], path) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for r in results:
            fh.write(json.dumps(r.to_json()) + "\n")
