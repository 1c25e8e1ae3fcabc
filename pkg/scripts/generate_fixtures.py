#!/usr/bin/env python3
"""Regenerate the deterministic test fixtures under tests/data/fixtures/.

Everything here is hand-designed so that expected counts, signatures and
cosines can be derived independently in the tests. Run from the repo
root:

    python3 scripts/generate_fixtures.py
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "fixtures"

BASE_TIME = datetime(2013, 3, 1, tzinfo=timezone.utc)

SHOWCASE_TARGET = "http://blog.example.net/2012/02/revolution-year.html"
SHOWCASE_PHRASE_TWEET = (
    "RT @acarvin: You may have seen this already. "
    "Arab Spring digital content is apparently being lost."
)
SHOWCASE_VARIANTS = [
    ("Wow", "folks"),
    ("Breaking", "today"),
    ("Notable", "everyone"),
    ("Superb", "tonight"),
    ("Indeed", "alas"),
]
SHOWCASE_COOCCURRING_SHORT = "http://t.co/0A1q2fzz"
SHOWCASE_COOCCURRING_RESOLVED = "http://example.com/arab-spring-archive"

INTEGRATION_TARGET = "http://news.example.org/egypt-revolution-coverage"

EVAL_TARGETS = [f"http://site{i}.example.org/article" for i in range(1, 6)]
EVAL_RANKS = {1: 1, 2: 2, 3: 4, 4: 5, 5: 3}  # target position per query
BELOW30_TARGET = "http://site9.example.org/article"


def post(idx, author, text, urls, created_at):
    return {
        "id": f"{idx:06d}",
        "author": author,
        "text": text,
        "created_at": created_at.isoformat(),
        "urls": urls,
    }


def showcase_posts(start_idx):
    posts = []
    idx = start_idx
    t = BASE_TIME

    def tick():
        nonlocal t
        t += timedelta(minutes=1)
        return t

    # 23 identical reposts -> most frequent tweet count 23
    for i in range(23):
        posts.append(post(
            idx, f"user{i % 7}",
            f"{SHOWCASE_PHRASE_TWEET} http://t.co/rep{i:03d}",
            [{"short": f"http://t.co/rep{i:03d}", "resolved": SHOWCASE_TARGET}],
            tick(),
        ))
        idx += 1
    # 5 variants containing the same 14-token phrase -> phrase count 28
    body = SHOWCASE_PHRASE_TWEET.replace("RT @acarvin: ", "")
    for i, (prefix, suffix) in enumerate(SHOWCASE_VARIANTS):
        posts.append(post(
            idx, f"varuser{i}",
            f"{prefix} {body} {suffix} http://t.co/var{i:03d}",
            [{"short": f"http://t.co/var{i:03d}", "resolved": SHOWCASE_TARGET}],
            tick(),
        ))
        idx += 1
    # 262 unique filler posts; 19 of them carry the co-occurring short link
    for i in range(262):
        urls = [{"short": f"http://t.co/fil{i:03d}", "resolved": SHOWCASE_TARGET}]
        if i < 19:
            urls.append({
                "short": SHOWCASE_COOCCURRING_SHORT,
                "resolved": SHOWCASE_COOCCURRING_RESOLVED,
            })
        tag = " #archives" if i % 3 == 0 else " #egypt #jan25"
        posts.append(post(
            idx, f"user{i % 40}",
            f"Filler note {i + 100} on web archiving and digital history{tag} "
            f"http://t.co/fil{i:03d}",
            urls,
            tick(),
        ))
        idx += 1
    return posts, idx


def integration_posts(start_idx):
    """37 posts whose stemmed doc counts are:
    egypt 29, revolut 22, coverag 12, lost 12, forev 12, archiv 10,
    matter 10, digit 8, content 8, tahrir 8, protest 8, rememb 7, spring 7.
    """
    posts = []
    idx = start_idx
    t = BASE_TIME + timedelta(days=30)

    def tick():
        nonlocal t
        t += timedelta(minutes=1)
        return t

    def tco(tag, i):
        return [{"short": f"http://t.co/{tag}{i:02d}", "resolved": INTEGRATION_TARGET}]

    for i in range(12):
        posts.append(post(
            idx, f"reporter{i % 5}",
            f"Egypt revolution coverage is lost forever http://t.co/cov{i:02d}",
            tco("cov", i), tick(),
        ))
        idx += 1
    for i in range(10):
        posts.append(post(
            idx, f"archivist{i % 4}",
            f"RT @historian{i}: Egypt revolution archives matter http://t.co/arc{i:02d}",
            tco("arc", i), tick(),
        ))
        idx += 1
    for i in range(8):
        urls = tco("tah", i)
        if i == 0:
            urls.append({"short": "http://bit.ly/coA",
                         "resolved": "http://example.com/context-a"})
        if i == 1:
            urls.append({"short": "http://bit.ly/coB",
                         "resolved": "http://example.com/context-b"})
        posts.append(post(
            idx, f"witness{i % 3}",
            f"Digital content from Tahrir protest http://t.co/tah{i:02d}",
            urls, tick(),
        ))
        idx += 1
    for i in range(7):
        posts.append(post(
            idx, f"memory{i}",
            f"Remembering Egypt spring http://t.co/spr{i:02d}",
            tco("spr", i), tick(),
        ))
        idx += 1
    return posts, idx


def eval_posts(start_idx):
    """Per eval target: 30 posts, stemmed counts archiv 30, egypt 30,
    number 30, report 30, topic{i} 30 (plus unique numeric tokens)."""
    posts = []
    idx = start_idx
    t = BASE_TIME + timedelta(days=60)

    def tick():
        nonlocal t
        t += timedelta(minutes=1)
        return t

    for i, target in enumerate(EVAL_TARGETS, start=1):
        for j in range(10, 40):
            posts.append(post(
                idx, f"site{i}fan{j % 6}",
                f"Topic{i} report number {j} about egypt archives "
                f"http://t.co/s{i}p{j}",
                [{"short": f"http://t.co/s{i}p{j}", "resolved": target}],
                tick(),
            ))
            idx += 1
    # below-minimum corpus: only 12 posts
    for j in range(10, 22):
        posts.append(post(
            idx, f"site9fan{j % 3}",
            f"Topic9 report number {j} about egypt archives http://t.co/s9p{j}",
            [{"short": f"http://t.co/s9p{j}", "resolved": BELOW30_TARGET}],
            tick(),
        ))
        idx += 1
    return posts, idx


def page_html(title, body_words, nav=True):
    nav_html = (
        '<ul><li><a href="/">Home</a></li><li><a href="/about">About</a></li>'
        '<li><a href="/contact">Contact</a></li></ul>'
    ) if nav else ""
    return (
        "<html><head><title>{t}</title><script>var x=1;</script>"
        "<style>p{{color:black}}</style></head><body><nav>{n}</nav>"
        "<div><p>{b}</p></div><footer><a href='/terms'>Terms</a></footer>"
        "</body></html>"
    ).format(t=title, n=nav_html, b=" ".join(body_words))


# term counts: egypt 5, revolut 4, archiv 2, protest 2, lost 1
BEST_MATCH_WORDS = (
    "Egypt revolution archives protest lost Egypt revolution archives "
    "protest Egypt revolution Egypt revolution Egypt"
).split()

GENERIC_PAGES = {
    f"http://pages.example.com/generic-{i}": (
        f"Gardening weather tomatoes rainfall pruning compost seedling "
        f"greenhouse harvest mulching trellis variant{i} soil watering"
    ).split()
    for i in range(2, 11)
}

CONTEXT_A_WORDS = (
    "Tahrir protest digital content gathered from witness reports during "
    "long nights of the protest movement"
).split()
CONTEXT_B_WORDS = (
    "Cooking stew recipes require patience plus fresh vegetables chopped "
    "finely before slow simmering overnight"
).split()


def integration_target_words():
    # text whose stemmed counts equal the tweet document counts exactly
    counts = [
        ("Egypt", 29), ("revolution", 22), ("coverage", 12), ("lost", 12),
        ("forever", 12), ("archives", 10), ("matter", 10), ("digital", 8),
        ("content", 8), ("Tahrir", 8), ("protest", 8), ("remembering", 7),
        ("spring", 7),
    ]
    words = []
    for word, n in counts:
        words.extend([word] * n)
    return words


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "pages").mkdir(exist_ok=True)
    (OUT / "timemaps").mkdir(exist_ok=True)

    # ---- social corpus ----
    posts = []
    idx = 0
    chunk, idx = showcase_posts(idx)
    posts += chunk
    chunk, idx = integration_posts(idx)
    posts += chunk
    chunk, idx = eval_posts(idx)
    posts += chunk
    with open(OUT / "social.jsonl", "w", encoding="utf-8") as fh:
        for p in posts:
            fh.write(json.dumps(p) + "\n")

    # ---- pages ----
    pages: dict[str, tuple[str, list[str]]] = {
        "http://pages.example.com/best-match": ("best-match.html", BEST_MATCH_WORDS),
        "http://example.com/context-a": ("context-a.html", CONTEXT_A_WORDS),
        "http://example.com/context-b": ("context-b.html", CONTEXT_B_WORDS),
        INTEGRATION_TARGET: ("integration-target.html", integration_target_words()),
    }
    for uri, words in GENERIC_PAGES.items():
        pages[uri] = (uri.rsplit("/", 1)[1] + ".html", words)
    for i, target in enumerate(EVAL_TARGETS, start=1):
        words = f"Topic{i} report egypt archives number assembled here for reading today".split()
        pages[target] = (f"site{i}-target.html", words)
    pages[BELOW30_TARGET] = (
        "site9-target.html",
        "Topic9 report egypt archives number assembled here for reading today".split(),
    )

    mapping = {}
    for uri, (fname, words) in pages.items():
        (OUT / "pages" / fname).write_text(
            page_html(uri, words), encoding="utf-8"
        )
        mapping[uri] = fname
    (OUT / "pages" / "pages.json").write_text(
        json.dumps(mapping, indent=2), encoding="utf-8"
    )

    # ---- search fixture ----
    search = {
        # integration signature query
        "egypt revolut coverag forev lost": (
            [{"uri": "http://pages.example.com/best-match", "snippet": "Egypt revolution archives"}]
            + [{"uri": u, "snippet": "gardening notes"} for u in sorted(GENERIC_PAGES)]
        ),
    }
    generic = sorted(GENERIC_PAGES)
    for i, target in enumerate(EVAL_TARGETS, start=1):
        query = f"archiv egypt number report topic{i}"
        rank = EVAL_RANKS[i]
        results = [{"uri": u, "snippet": "gardening notes"} for u in generic[:4]]
        results.insert(rank - 1, {"uri": target, "snippet": f"Topic{i} report"})
        search[query] = results
    (OUT / "search.json").write_text(json.dumps(search, indent=2), encoding="utf-8")

    # ---- timemap fixtures ----
    (OUT / "timemaps" / "two_mementos.link").write_text(
        '<http://example.com/page>; rel="original",\n'
        '<http://archive-a.example.net/20120101000000/http://example.com/page>;'
        ' rel="memento"; datetime="Sun, 01 Jan 2012 00:00:00 GMT",\n'
        '<http://archive-b.example.net/20130101000000/http://example.com/page>;'
        ' rel="memento"; datetime="Tue, 01 Jan 2013 00:00:00 GMT",\n'
        '<http://aggregator.example.net/timemap/link/http://example.com/page>;'
        ' rel="self timemap"\n',
        encoding="utf-8",
    )
    (OUT / "timemaps" / "duplicate_memento.link").write_text(
        '<http://example.com/page>; rel="original",\n'
        '<http://archive-a.example.net/20120101000000/http://example.com/page>;'
        ' rel="memento"; datetime="Sun, 01 Jan 2012 00:00:00 GMT",\n'
        '<http://archive-a.example.net/20120101000000/http://example.com/page>;'
        ' rel="memento"; datetime="Mon, 02 Jan 2012 00:00:00 GMT"\n',
        encoding="utf-8",
    )
    (OUT / "timemaps" / "one_memento.link").write_text(
        '<http://example.com/fading>; rel="original",\n'
        '<http://cache.example.net/fading>; rel="memento";'
        ' datetime="Sun, 01 Jan 2012 00:00:00 GMT"\n',
        encoding="utf-8",
    )
    (OUT / "timemaps" / "zero_mementos.link").write_text(
        '<http://example.com/fading>; rel="original"\n',
        encoding="utf-8",
    )
    (OUT / "timemaps" / "bad_datetime.link").write_text(
        '<http://example.com/page>; rel="original",\n'
        '<http://archive-a.example.net/x/http://example.com/page>;'
        ' rel="memento"; datetime="not a date",\n'
        '<http://archive-b.example.net/20130101000000/http://example.com/page>;'
        ' rel="memento"; datetime="Tue, 01 Jan 2013 00:00:00 GMT"\n',
        encoding="utf-8",
    )

    # ---- evaluation dataset ----
    (OUT / "dataset.txt").write_text(
        "\n".join(EVAL_TARGETS + [BELOW30_TARGET]) + "\n", encoding="utf-8"
    )
    (OUT / "dataset_below30.txt").write_text(BELOW30_TARGET + "\n", encoding="utf-8")

    # ---- sample CLI config (paths relative to this file's directory) ----
    (OUT / "config.sample.json").write_text(json.dumps({
        "social_fixture": "social.jsonl",
        "search_fixture": "search.json",
        "pages_fixture": "pages/pages.json",
        "timemap_fixture_dir": "timemaps",
        "per_host_delay": 0.0,
        "repeat_count": 1,
    }, indent=2), encoding="utf-8")

    print(f"wrote fixtures for {len(posts)} posts into {OUT}")


if __name__ == "__main__":
    main()
