"""Replacement recommendation: build the tweet signature, harvest
candidates from a search provider plus co-occurring links, and rank them
by cosine similarity against the Tweet Document."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Protocol

from .core import CanonicalUri, canonicalize
from .errors import EmptySignature, FetchError, ProviderUnavailable
from .social import (
    ContextSummary,
    SocialProvider,
    TweetDocument,
    build_tweet_document,
    extract_cooccurring,
    fetch_corpus,
    summarize_context,
)
from .textpipe import (
    StopwordList,
    TermVector,
    concat_phrases,
    cosine,
    extract_main_text,
    term_vector,
)

log = logging.getLogger(__name__)

SEARCH_RESULT_LIMIT = 10
SIGNATURE_SIZE = 5


@dataclass(frozen=True)
class TweetSignature:
    terms: tuple[str, ...]
    frequencies: tuple[int, ...]

    def query(self) -> str:
        return " ".join(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)


class CandidateOrigin(Enum):
    SEARCH = "Search"
    COOCCURRING = "Cooccurring"


@dataclass(frozen=True)
class CandidateSet:
    search_results: tuple[tuple[CanonicalUri, str], ...]  # (uri, snippet)
    cooccurring: tuple[CanonicalUri, ...]

    def __post_init__(self):
        seen = set()
        deduped = []
        for uri, snippet in self.search_results[:SEARCH_RESULT_LIMIT]:
            if uri not in seen:
                seen.add(uri)
                deduped.append((uri, snippet))
        object.__setattr__(self, "search_results", tuple(deduped))
        seen_co = set()
        co = []
        for uri in self.cooccurring:
            if uri not in seen_co:
                seen_co.add(uri)
                co.append(uri)
        object.__setattr__(self, "cooccurring", tuple(co))


@dataclass(frozen=True)
class RankedCandidate:
    uri: CanonicalUri
    similarity: float
    origin: CandidateOrigin
    extracted_text_len: int

    def to_json(self) -> dict:
        return {
            "uri": str(self.uri),
            "similarity": self.similarity,
            "origin": self.origin.value,
            "extracted_text_len": self.extracted_text_len,
        }


@dataclass(frozen=True)
class ReplacementReport:
    target: CanonicalUri
    context: ContextSummary
    signature: TweetSignature
    ranked: tuple[RankedCandidate, ...]

    @property
    def best(self) -> RankedCandidate | None:
        return self.ranked[0] if self.ranked else None

    def to_json(self) -> dict:
        best = self.best
        return {
            "schema_version": 1,
            "target": str(self.target),
            "context": self.context.to_json(),
            "signature": {
                "terms": list(self.signature.terms),
                "frequencies": list(self.signature.frequencies),
            },
            "ranked": [c.to_json() for c in self.ranked],
            "best": best.to_json() if best else None,
        }


class SearchProvider(Protocol):
    def search(self, query: str, limit: int) -> list[tuple[CanonicalUri, str]]:
        """Ordered (uri, snippet) results for an exact query string."""


class JsonSearchProvider:
    """Fixture provider: a JSON object mapping exact query strings to
    result lists [{"uri": ..., "snippet": ...}, ...]."""

    def __init__(self, path: str | Path):
        self._path = Path(path)

    def search(self, query: str, limit: int) -> list[tuple[CanonicalUri, str]]:
        if not self._path.is_file():
            raise ProviderUnavailable(str(self._path))
        table = json.loads(self._path.read_text(encoding="utf-8"))
        results = table.get(query, [])
        return [
            (canonicalize(r["uri"]), r.get("snippet", "")) for r in results[:limit]
        ]


class Fetcher(Protocol):
    def fetch(self, uri: CanonicalUri) -> str:
        """Return the page body, or raise FetchError."""


class FixtureFetcher:
    """Serves page bodies from a JSON mapping of canonical URI -> HTML
    file path (relative to the mapping file's directory)."""

    def __init__(self, mapping_path: str | Path):
        self._path = Path(mapping_path)
        if not self._path.is_file():
            raise ProviderUnavailable(str(self._path))
        self._base = self._path.parent
        self._table = {
            str(canonicalize(k)): v
            for k, v in json.loads(self._path.read_text(encoding="utf-8")).items()
        }

    def fetch(self, uri: CanonicalUri) -> str:
        rel = self._table.get(str(uri))
        if rel is None:
            raise FetchError(str(uri))
        page = self._base / rel
        if not page.is_file():
            raise FetchError(f"{uri}: missing fixture file {page}")
        return page.read_text(encoding="utf-8")


class LiveFetcher:
    """Fetches candidate pages over HTTP via a probe-style client."""

    def __init__(self, client, timeout: float = 10.0, user_agent: str = "webrot/0.1"):
        self._client = client
        self._timeout = timeout
        self._headers = {"User-Agent": user_agent}

    def fetch(self, uri: CanonicalUri) -> str:
        try:
            resp = self._client.get(
                str(uri), timeout=self._timeout, headers=self._headers
            )
        except Exception as exc:
            raise FetchError(f"{uri}: {exc}") from exc
        if resp.status_code != 200:
            raise FetchError(f"{uri}: status {resp.status_code}")
        return resp.text


def build_signature(doc: TweetDocument, stopwords: StopwordList) -> TweetSignature:
    """Top five stemmed terms of the Tweet Document by count, ties broken
    lexicographically ascending."""
    vector = term_vector(concat_phrases(doc.phrases), stopwords)
    ordered = sorted(vector.weights.items(), key=lambda kv: (-kv[1], kv[0]))
    top = ordered[:SIGNATURE_SIZE]
    return TweetSignature(
        terms=tuple(t for t, _ in top), frequencies=tuple(c for _, c in top)
    )


def search_candidates(
    provider: SearchProvider,
    sig: TweetSignature,
    limit: int = SEARCH_RESULT_LIMIT,
) -> list[tuple[CanonicalUri, str]]:
    if not sig:
        raise EmptySignature("signature has no terms")
    return provider.search(sig.query(), limit)[:limit]


def rank_candidates(
    doc: TweetDocument,
    cands: CandidateSet,
    fetcher: Fetcher,
    stopwords: StopwordList,
) -> list[RankedCandidate]:
    """Fetch, extract and score every candidate; unreachable or empty
    pages are dropped. Search origin wins when a URI appears in both
    lists."""
    doc_vector = term_vector(concat_phrases(doc.phrases), stopwords)
    candidates: dict[CanonicalUri, CandidateOrigin] = {}
    for uri, _snippet in cands.search_results:
        candidates[uri] = CandidateOrigin.SEARCH
    for uri in cands.cooccurring:
        candidates.setdefault(uri, CandidateOrigin.COOCCURRING)

    ranked = []
    for uri, origin in candidates.items():
        try:
            body = fetcher.fetch(uri)
        except FetchError as exc:
            log.info("candidate dropped (fetch failed): %s", exc)
            continue
        text = extract_main_text(body)
        if not text.strip():
            log.info("candidate dropped (no extractable text): %s", uri)
            continue
        vector = term_vector(text, stopwords)
        ranked.append(
            RankedCandidate(
                uri=uri,
                similarity=cosine(doc_vector, vector),
                origin=origin,
                extracted_text_len=len(text),
            )
        )
    ranked.sort(key=lambda c: (-c.similarity, c.origin.value != "Search", str(c.uri)))
    return ranked


def recommend(
    target: CanonicalUri | str,
    social_provider: SocialProvider,
    search_provider: SearchProvider,
    fetcher: Fetcher,
    stopwords: StopwordList,
    corpus_limit: int = 500,
    search_limit: int = SEARCH_RESULT_LIMIT,
) -> ReplacementReport:
    """Full pipeline: corpus -> context -> signature -> candidates ->
    ranked report. An empty corpus (or one that cleans to nothing) yields
    a report with an empty signature and no candidates."""
    target = canonicalize(target)
    corpus = fetch_corpus(social_provider, target, corpus_limit)
    context = summarize_context(corpus)
    doc = build_tweet_document(corpus)
    signature = build_signature(doc, stopwords)
    if signature:
        search_results = search_candidates(search_provider, signature, search_limit)
        cooccurring = extract_cooccurring(corpus, target)
        cands = CandidateSet(
            search_results=tuple(search_results), cooccurring=tuple(cooccurring)
        )
        ranked = rank_candidates(doc, cands, fetcher, stopwords)
    else:
        ranked = []
    return ReplacementReport(
        target=target, context=context, signature=signature, ranked=tuple(ranked)
    )
