"""Social link neighborhood: fetch posts about a URI from a pluggable
provider, clean their text, and distill the context summary and the
Tweet Document used for replacement ranking.

The shipped provider reads JSON-lines fixture files (one post per line,
fields {id, author, text, created_at, urls: [{short, resolved}]}); the
original indexing service no longer exists, so everything must work
offline.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol

from .core import CanonicalUri, canonicalize
from .errors import ProviderUnavailable

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+:?")
_HASHTAG_RE = re.compile(r"#(\w+)")
_MENTION_FIND_RE = re.compile(r"@(\w+)")
_EDGE_PUNCT_RE = re.compile(r"^\W+|\W+$", re.UNICODE)


@dataclass(frozen=True)
class SocialPost:
    post_id: str
    author: str
    text: str
    created_at: datetime
    embedded_uris: tuple[CanonicalUri, ...]  # resolved, canonical
    shared_links: tuple[str, ...]  # short forms exactly as shared
    hashtags: tuple[str, ...]
    mentions: tuple[str, ...]
    post_uri: CanonicalUri | None = None


@dataclass(frozen=True)
class SocialCorpus:
    target: CanonicalUri
    posts: tuple[SocialPost, ...]  # newest first

    def __len__(self) -> int:
        return len(self.posts)


@dataclass(frozen=True)
class TweetDocument:
    target: CanonicalUri
    phrases: tuple[str, ...]


@dataclass(frozen=True)
class ContextSummary:
    uri: CanonicalUri
    related_tweet_count: int
    related_hashtags: tuple[str, ...]
    users: tuple[str, ...]
    unique_links: tuple[str, ...]
    cooccurring_links: tuple[CanonicalUri, ...]
    most_frequent_link: tuple[str, int]
    most_frequent_tweet: tuple[str, int]
    longest_common_phrase: tuple[str, int]

    def to_json(self) -> dict:
        """Stable key names for the serialized context object."""
        return {
            "schema_version": 1,
            "URI": str(self.uri),
            "Related Tweet Count": self.related_tweet_count,
            "Related Hashtags": " ".join(f"#{t}" for t in self.related_hashtags),
            "Users who talked about this": " ".join(f"@{u}" for u in self.users),
            "All associated unique links": " ".join(self.unique_links),
            "All other links associated": " ".join(str(u) for u in self.cooccurring_links),
            "Most frequent link appearing": self.most_frequent_link[0],
            "Number of times the Most frequent link appearing": self.most_frequent_link[1],
            "Most frequent tweet posted and reposted": self.most_frequent_tweet[0],
            "Number of times the Most frequent tweet appearing": self.most_frequent_tweet[1],
            "The longest common phrase appearing": self.longest_common_phrase[0],
            "Number of times the Most common phrase appearing": self.longest_common_phrase[1],
        }


class SocialProvider(Protocol):
    def posts_for(self, target: CanonicalUri, limit: int) -> list[SocialPost]:
        """Most recent posts mentioning the (final, canonical) target."""


def _parse_created_at(value: str) -> datetime:
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def post_from_record(record: dict) -> SocialPost:
    """Build a SocialPost from one fixture JSON record."""
    text = record["text"]
    embedded = []
    shared = []
    for pair in record.get("urls", []):
        shared.append(pair["short"])
        try:
            embedded.append(canonicalize(pair["resolved"]))
        except Exception:
            continue
    return SocialPost(
        post_id=str(record["id"]),
        author=record["author"],
        text=text,
        created_at=_parse_created_at(record["created_at"]),
        embedded_uris=tuple(embedded),
        shared_links=tuple(shared),
        hashtags=tuple(t.lower() for t in _HASHTAG_RE.findall(text)),
        mentions=tuple(_MENTION_FIND_RE.findall(text)),
    )


class JsonlSocialProvider:
    """Fixture provider over a JSON-lines file of posts."""

    def __init__(self, path: str | Path):
        self._path = Path(path)

    def posts_for(self, target: CanonicalUri, limit: int) -> list[SocialPost]:
        if not self._path.is_file():
            raise ProviderUnavailable(str(self._path))
        posts = []
        with open(self._path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                post = post_from_record(json.loads(line))
                if target in post.embedded_uris:
                    posts.append(post)
        posts.sort(key=lambda p: (p.created_at, p.post_id), reverse=True)
        return posts[:limit]


def fetch_corpus(
    provider: SocialProvider, target: CanonicalUri | str, limit: int = 500
) -> SocialCorpus:
    """Up to `limit` most recent posts about the target. Zero posts is a
    valid (empty) corpus, not an error."""
    target = canonicalize(target)
    posts = provider.posts_for(target, limit)
    return SocialCorpus(target=target, posts=tuple(posts[:limit]))


def clean_post_text(text: str) -> str:
    """Strip URIs, @-mentions, standalone RT/MT tokens and edge
    punctuation; lowercase and collapse whitespace. Hashtag words are
    kept without the # symbol."""
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    tokens = []
    for raw in text.split():
        tok = _EDGE_PUNCT_RE.sub("", raw)
        if not tok:
            continue
        low = tok.lower()
        if low in ("rt", "mt"):
            continue
        tokens.append(low)
    return " ".join(tokens)


def build_tweet_document(corpus: SocialCorpus) -> TweetDocument:
    phrases = [clean_post_text(p.text) for p in corpus.posts]
    return TweetDocument(
        target=corpus.target, phrases=tuple(p for p in phrases if p)
    )


def extract_cooccurring(
    corpus: SocialCorpus, target: CanonicalUri | str
) -> list[CanonicalUri]:
    """Union of embedded URIs minus the target, count-ordered."""
    target = canonicalize(target)
    counts: Counter[CanonicalUri] = Counter()
    for post in corpus.posts:
        for uri in post.embedded_uris:
            if uri != target:
                counts[uri] += 1
    return sorted(counts, key=lambda u: (-counts[u], str(u)))


def longest_common_phrase(doc: TweetDocument) -> tuple[str, int]:
    """Longest token n-gram occurring in at least two distinct phrases.

    Ties break toward higher phrase count, then lexicographic. Count is
    the number of phrases containing the n-gram.
    """
    token_lists = [p.split() for p in doc.phrases]
    if len(token_lists) < 2:
        return ("", 0)
    max_n = max(len(t) for t in token_lists)
    for n in range(max_n, 0, -1):
        containing: dict[tuple[str, ...], set[int]] = {}
        for i, toks in enumerate(token_lists):
            for j in range(len(toks) - n + 1):
                containing.setdefault(tuple(toks[j : j + n]), set()).add(i)
        shared = {g: idx for g, idx in containing.items() if len(idx) >= 2}
        if shared:
            best = min(shared.items(), key=lambda kv: (-len(kv[1]), kv[0]))
            return (" ".join(best[0]), len(best[1]))
    return ("", 0)


def summarize_context(corpus: SocialCorpus) -> ContextSummary:
    """Aggregate the corpus into the context summary object."""
    hashtag_counts: Counter[str] = Counter()
    author_counts: Counter[str] = Counter()
    link_counts: Counter[str] = Counter()
    unique_links: list[str] = []
    seen_links: set[str] = set()
    tweet_counts: Counter[str] = Counter()

    for post in corpus.posts:
        hashtag_counts.update(post.hashtags)
        author_counts[post.author] += 1
        for short in post.shared_links:
            link_counts[short] += 1
            if short not in seen_links:
                seen_links.add(short)
                unique_links.append(short)
        cleaned = clean_post_text(post.text)
        if cleaned:
            tweet_counts[cleaned] += 1

    def top(counter: Counter[str]) -> tuple[str, int]:
        if not counter:
            return ("", 0)
        best = min(counter.items(), key=lambda kv: (-kv[1], kv[0]))
        return best

    doc = build_tweet_document(corpus)
    return ContextSummary(
        uri=corpus.target,
        related_tweet_count=len(corpus.posts),
        related_hashtags=tuple(
            sorted(hashtag_counts, key=lambda t: (-hashtag_counts[t], t))
        ),
        users=tuple(sorted(author_counts, key=lambda a: (-author_counts[a], a))),
        unique_links=tuple(unique_links),
        cooccurring_links=tuple(extract_cooccurring(corpus, corpus.target)),
        most_frequent_link=top(link_counts),
        most_frequent_tweet=top(tweet_counts),
        longest_common_phrase=longest_common_phrase(doc),
    )
