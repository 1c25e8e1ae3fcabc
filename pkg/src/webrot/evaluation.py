"""Evaluation protocol on fixture datasets: treat live pages as
pretend-missing, run the replacement pipeline, and report similarity
distributions, threshold fractions, and mean reciprocal rank."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .core import CanonicalUri, canonicalize
from .errors import EmptyInput, FetchError
from .replace import (
    CandidateSet,
    Fetcher,
    SearchProvider,
    build_signature,
    search_candidates,
)
from .social import SocialProvider, build_tweet_document, extract_cooccurring, fetch_corpus
from .textpipe import (
    StopwordList,
    TermVector,
    concat_phrases,
    cosine,
    extract_main_text,
    term_vector,
)

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.70
DEFAULT_MIN_POSTS = 30


@dataclass(frozen=True)
class EvaluationRecord:
    target: CanonicalUri
    sim_tweetdoc: float
    sim_first_search: float
    best_sim_search: float
    best_sim_cooccurring: float
    best_sim_union: float
    rank_of_target_in_search: int | None

    def to_row(self) -> dict:
        return {
            "target": str(self.target),
            "sim_tweetdoc": self.sim_tweetdoc,
            "sim_first_search": self.sim_first_search,
            "best_sim_search": self.best_sim_search,
            "best_sim_cooccurring": self.best_sim_cooccurring,
            "best_sim_union": self.best_sim_union,
            "rank_of_target_in_search": self.rank_of_target_in_search,
        }


@dataclass(frozen=True)
class EvaluationSummary:
    n: int
    threshold: float
    fraction_at_threshold: float
    mrr: float
    similarity_cdf: tuple[tuple[float, float], ...]
    skipped: dict[str, int]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.n,
            "threshold": self.threshold,
            "fraction_at_threshold": self.fraction_at_threshold,
            "mrr": self.mrr,
            "similarity_cdf": [[s, f] for s, f in self.similarity_cdf],
            "skipped": dict(self.skipped),
        }


def _page_vector(fetcher: Fetcher, uri: CanonicalUri, stopwords: StopwordList):
    body = fetcher.fetch(uri)
    text = extract_main_text(body)
    if not text.strip():
        raise FetchError(f"{uri}: no extractable text")
    return term_vector(text, stopwords)


def run_evaluation(
    dataset: Sequence[CanonicalUri | str],
    social_provider: SocialProvider,
    search_provider: SearchProvider,
    fetcher: Fetcher,
    stopwords: StopwordList,
    min_posts: int = DEFAULT_MIN_POSTS,
    corpus_limit: int = 500,
    search_limit: int = 10,
) -> tuple[list[EvaluationRecord], dict[str, int]]:
    """Per-URI records plus a skip tally. Per-URI failures never abort
    the run; they are counted by reason."""
    records: list[EvaluationRecord] = []
    skipped: dict[str, int] = {}

    def skip(reason: str):
        skipped[reason] = skipped.get(reason, 0) + 1

    for raw in dataset:
        try:
            target = canonicalize(raw)
        except Exception:
            skip("malformed-uri")
            continue
        try:
            target_vector = _page_vector(fetcher, target, stopwords)
        except FetchError:
            skip("target-unfetchable")
            continue
        corpus = fetch_corpus(social_provider, target, corpus_limit)
        if len(corpus) < min_posts:
            skip("below-min-posts")
            continue
        doc = build_tweet_document(corpus)
        doc_vector = term_vector(concat_phrases(doc.phrases), stopwords)
        signature = build_signature(doc, stopwords)
        if not signature:
            skip("empty-signature")
            continue
        search_results = search_candidates(search_provider, signature, search_limit)
        cooccurring = extract_cooccurring(corpus, target)

        def sims(uris):
            out = []
            for uri in uris:
                try:
                    out.append(cosine(target_vector, _page_vector(fetcher, uri, stopwords)))
                except FetchError as exc:
                    log.info("candidate dropped: %s", exc)
            return out

        search_sims = sims([uri for uri, _ in search_results])
        co_sims = sims(cooccurring)
        best_search = max(search_sims, default=0.0)
        best_co = max(co_sims, default=0.0)
        rank = None
        for i, (uri, _snippet) in enumerate(search_results, start=1):
            if uri == target:
                rank = i
                break
        records.append(
            EvaluationRecord(
                target=target,
                sim_tweetdoc=cosine(target_vector, doc_vector),
                sim_first_search=search_sims[0] if search_sims else 0.0,
                best_sim_search=best_search,
                best_sim_cooccurring=best_co,
                best_sim_union=max(best_search, best_co),
                rank_of_target_in_search=rank,
            )
        )
    return records, skipped


def mrr(ranks: Sequence[int | None]) -> float:
    """Mean reciprocal rank; absent items contribute zero."""
    if not ranks:
        raise EmptyInput("no ranks")
    return sum(1.0 / r for r in ranks if r is not None) / len(ranks)


def fraction_at_threshold(
    records: Sequence[EvaluationRecord],
    threshold: float = DEFAULT_THRESHOLD,
    field: str = "best_sim_union",
) -> float:
    if not records:
        raise EmptyInput("no records")
    hits = sum(1 for r in records if getattr(r, field) >= threshold)
    return hits / len(records)


def emit_cdf(
    records: Sequence[EvaluationRecord], field: str = "best_sim_union"
) -> list[tuple[float, float]]:
    """Sorted similarities with cumulative fractions, one point per record."""
    if not records:
        raise EmptyInput("no records")
    sims = sorted(getattr(r, field) for r in records)
    n = len(sims)
    return [(s, (i + 1) / n) for i, s in enumerate(sims)]


def summarize(
    records: Sequence[EvaluationRecord],
    skipped: dict[str, int],
    threshold: float = DEFAULT_THRESHOLD,
    field: str = "best_sim_union",
) -> EvaluationSummary:
    if records:
        frac = fraction_at_threshold(records, threshold, field)
        rr = mrr([r.rank_of_target_in_search for r in records])
        cdf = tuple(emit_cdf(records, field))
    else:
        frac, rr, cdf = 0.0, 0.0, ()
    return EvaluationSummary(
        n=len(records),
        threshold=threshold,
        fraction_at_threshold=frac,
        mrr=rr,
        similarity_cdf=cdf,
        skipped=skipped,
    )


_CSV_FIELDS = [
    "target",
    "sim_tweetdoc",
    "sim_first_search",
    "best_sim_search",
    "best_sim_cooccurring",
    "best_sim_union",
    "rank_of_target_in_search",
]


def write_records_csv(records: Sequence[EvaluationRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        for r in records:
            writer.writerow(r.to_row())


def write_cdf_csv(cdf: Sequence[tuple[float, float]], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["similarity", "cum_fraction"])
        writer.writerows(cdf)


def write_summary_json(summary: EvaluationSummary, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary.to_json(), indent=2), encoding="utf-8")


def read_dataset(path: str | Path) -> list[str]:
    """Plain-text dataset file, one URI per line, # comments allowed."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    uris = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not uris:
        raise EmptyInput(str(path))
    return uris
