"""Deterministic text processing: tokenization, stopwords, stemming,
term-frequency vectors, cosine similarity, and main-content extraction.

The pipeline order is pinned: tokenize -> drop stopwords -> stem -> count.
Raw term frequency is used; tf-idf is deliberately not the default.
"""

from __future__ import annotations

import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from . import porter

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_ASCII_ALPHA_RE = re.compile(r"^[a-z]+$")


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    source_id: str

    def __post_init__(self):
        if not self.words:
            raise ValueError("stopword list must be nonempty")

    def __contains__(self, word: str) -> bool:
        return word in self.words


def load_stopwords(path: str | Path, source_id: str | None = None) -> StopwordList:
    """Load a one-word-per-line stopword file."""
    path = Path(path)
    words = frozenset(
        line.strip().lower()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    )
    return StopwordList(words=words, source_id=source_id or path.name)


def default_stopwords() -> StopwordList:
    ref = resources.files("webrot").joinpath("data/stopwords_english.txt")
    words = frozenset(
        line.strip().lower()
        for line in ref.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    )
    return StopwordList(words=words, source_id="webrot-english-v1")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, keep tokens of length >= 2."""
    text = unicodedata.normalize("NFC", text).casefold()
    return [t for t in _TOKEN_RE.findall(text) if len(t) >= 2]


def stem(token: str) -> str:
    """Porter-stem ASCII-alphabetic tokens; others pass through untouched."""
    if _ASCII_ALPHA_RE.match(token):
        return porter.stem(token)
    return token


@dataclass(frozen=True)
class TermVector:
    weights: Mapping[str, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.weights)

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.weights.values()))

    def dot(self, other: "TermVector") -> float:
        a, b = self.weights, other.weights
        if len(b) < len(a):
            a, b = b, a
        return float(sum(c * b[t] for t, c in a.items() if t in b))


def term_vector(text: str, stopwords: StopwordList) -> TermVector:
    # stopwords are filtered again post-stem: stemming can collapse a rare
    # surface form onto a stopword (e.g. "sos" -> "so")
    counts = Counter(
        stemmed
        for tok in tokenize(text)
        if tok not in stopwords
        for stemmed in (stem(tok),)
        if stemmed and stemmed not in stopwords
    )
    return TermVector(weights=dict(counts))


def cosine(a: TermVector, b: TermVector) -> float:
    """Cosine similarity in [0, 1]; zero when either vector is empty."""
    if not a or not b:
        return 0.0
    return a.dot(b) / (a.norm() * b.norm())


_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2",
    "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p",
    "pre", "section", "table", "tbody", "td", "tfoot", "th", "thead", "tr",
    "ul",
}
_SKIP_TAGS = {"script", "style", "noscript", "template"}


class _BlockCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.blocks: list[list[tuple[str, bool]]] = []
        self._current: list[tuple[str, bool]] = []
        self._skip_depth = 0
        self._link_depth = 0

    def _flush(self):
        if self._current:
            self.blocks.append(self._current)
            self._current = []

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "a":
            self._link_depth += 1
        elif tag in _BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag == "a":
            self._link_depth = max(0, self._link_depth - 1)
        elif tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._skip_depth == 0 and data.strip():
            self._current.append((data, self._link_depth > 0))

    def close(self):
        super().close()
        self._flush()


def extract_main_text(
    html: str,
    max_link_density: float = 0.33,
    min_words: int = 10,
) -> str:
    """Strip markup and keep the low-link-density content blocks.

    Blocks with link-token density below ``max_link_density`` and at least
    ``min_words`` words are kept; the single longest block is always kept.
    Tag soup never raises: the stdlib parser scans forgivingly.
    """
    parser = _BlockCollector()
    parser.feed(html)
    parser.close()

    scored: list[tuple[list[str], int, float]] = []
    for chunks in parser.blocks:
        words: list[str] = []
        link_words = 0
        for text, in_link in chunks:
            toks = text.split()
            words.extend(toks)
            if in_link:
                link_words += len(toks)
        if not words:
            continue
        scored.append((words, len(words), link_words / len(words)))
    if not scored:
        return ""

    longest = max(range(len(scored)), key=lambda i: scored[i][1])
    kept = [
        " ".join(words)
        for i, (words, count, density) in enumerate(scored)
        if i == longest or (density < max_link_density and count >= min_words)
    ]
    return "\n".join(kept)


def concat_phrases(phrases: Iterable[str]) -> str:
    return " ".join(phrases)
