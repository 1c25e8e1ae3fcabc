"""Command-line surface tying the modules into runnable workflows.

Exit codes: 0 success, 2 config/input error, 3 provider error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import click

from . import archive, decay, evaluation, probe, replace, social, textpipe
from .cache import Cache
from .config import Config, load_config
from .core import Liveness, canonicalize, classify_status
from .errors import (
    CacheLocked,
    ConfigError,
    EmptyInput,
    MalformedUri,
    OfflineViolation,
    ProviderUnavailable,
    TimeMapParseError,
    UnknownModel,
    UnsupportedScheme,
    WebrotError,
)

EXIT_CONFIG = 2
EXIT_PROVIDER = 3


@dataclass
class App:
    config: Config
    offline: bool
    fixed_clock: datetime | None
    fmt: str

    def now(self) -> datetime:
        return self.fixed_clock or datetime.now(timezone.utc)

    def clock(self):
        return self.now

    def client(self):
        if self.offline:
            return probe.OfflineClient()
        return probe.RequestsClient()

    def policy(self) -> probe.ProbePolicy:
        c = self.config
        return probe.ProbePolicy(
            timeout=c.timeout,
            max_redirects=c.max_redirects,
            repeat_count=c.repeat_count,
            repeat_spacing=c.repeat_spacing,
            per_host_delay=c.per_host_delay,
            soft404_threshold=c.soft404_threshold,
            user_agent=c.user_agent,
        )

    def cache(self) -> Cache:
        return Cache(self.config.cache_dir)

    def stopwords(self) -> textpipe.StopwordList:
        if self.config.stopword_file:
            return textpipe.load_stopwords(self.config.stopword_file)
        return textpipe.default_stopwords()

    def social_provider(self) -> social.SocialProvider:
        if not self.config.social_fixture:
            raise ProviderUnavailable("no social_fixture configured")
        return social.JsonlSocialProvider(self.config.social_fixture)

    def search_provider(self) -> replace.SearchProvider:
        if not self.config.search_fixture:
            raise ProviderUnavailable("no search_fixture configured")
        return replace.JsonSearchProvider(self.config.search_fixture)

    def fetcher(self) -> replace.Fetcher:
        if self.config.pages_fixture:
            return replace.FixtureFetcher(self.config.pages_fixture)
        if self.offline:
            raise OfflineViolation("live page fetching disabled in --offline mode")
        return replace.LiveFetcher(
            probe.RequestsClient(),
            timeout=self.config.timeout,
            user_agent=self.config.user_agent,
        )

    def timemap_source(self):
        if self.config.timemap_fixture_dir:
            return archive.FixtureTimeMapSource(self.config.timemap_fixture_dir)
        return archive.HttpTimeMapSource(
            self.config.timemap_endpoint,
            self.client(),
            timeout=self.config.timeout,
            user_agent=self.config.user_agent,
        )


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Flat JSON config file.")
@click.option("--offline", is_flag=True, help="Fail fast on any non-fixture fetch.")
@click.option("--fixed-clock", default=None, metavar="ISO8601",
              help="Deterministic timestamp source for reproducible output.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
              default="text", show_default=True)
@click.pass_context
def main(ctx, config_path, offline, fixed_clock, fmt):
    """Classify web resources, model their decay, and mine replacements."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    clock = None
    if fixed_clock:
        try:
            clock = datetime.fromisoformat(fixed_clock)
            if clock.tzinfo is None:
                clock = clock.replace(tzinfo=timezone.utc)
        except ValueError:
            _fail(EXIT_CONFIG, f"bad --fixed-clock value: {fixed_clock}")
    ctx.obj = App(config=cfg, offline=offline, fixed_clock=clock, fmt=fmt)


@main.command()
@click.argument("uris", nargs=-1, required=True)
@click.pass_obj
def check(app: App, uris):
    """Probe liveness + archived status and print the resource status."""
    client = app.client()
    policy = app.policy()
    tm_source = app.timemap_source()
    rows = []
    try:
        with app.cache() as cache:
            for raw in uris:
                row = {"uri": raw, "status": "Uncertain", "live": None,
                       "archived": None, "verdict": None}
                try:
                    uri = canonicalize(raw)
                except (MalformedUri, UnsupportedScheme) as exc:
                    row["verdict"] = f"invalid: {exc}"
                    rows.append(row)
                    continue
                row["uri"] = str(uri)
                try:
                    verdict, results = probe.probe_stable(
                        uri, policy, client, clock=app.clock()
                    )
                except OfflineViolation:
                    _fail(EXIT_PROVIDER, f"offline mode forbids probing {uri}")
                row["verdict"] = f"{verdict.value.value}({verdict.reason.value})"
                for r in results:
                    cache.append_jsonl("probes", uri, r.to_json())
                try:
                    tm = tm_source.get(uri, retrieved_at=app.now())
                except OfflineViolation:
                    _fail(EXIT_PROVIDER, f"offline mode forbids timemap fetch for {uri}")
                except Exception as exc:
                    rows.append(row)
                    continue
                cache.write_json("timemaps", uri, archive.snapshot_to_json(tm),
                                 suffix=f".{app.now().strftime('%Y%m%dT%H%M%S')}.json")
                archived = archive.is_archived(tm)
                row["archived"] = archived
                if verdict.value is not Liveness.UNCERTAIN:
                    live = verdict.value is Liveness.LIVE
                    row["live"] = live
                    row["status"] = classify_status(live, archived).value
                record = {"schema_version": 1, **row}
                cache.append_jsonl("reports", uri, record)
                rows.append(row)
    except CacheLocked as exc:
        _fail(EXIT_CONFIG, f"cache is locked by another process: {exc}")
    if app.fmt == "json":
        for row in rows:
            click.echo(json.dumps({"schema_version": 1, **row}, sort_keys=True))
    else:
        for row in rows:
            click.echo(f"{row['status']:<14} {row['verdict'] or '-':<26} {row['uri']}")


@main.command()
@click.argument("model_name")
@click.argument("age_days", type=float)
@click.option("--clamp", is_flag=True, help="Clamp the prediction to [0, 100].")
@click.pass_obj
def predict(app: App, model_name, age_days, clamp):
    """Evaluate a built-in decay model at an age in days."""
    try:
        if model_name.endswith(".json") or Path(model_name).is_file():
            doc = json.loads(Path(model_name).read_text(encoding="utf-8"))
            model = decay.DecayModel(doc["slope"], doc["intercept"])
        else:
            model = decay.model_by_name(model_name)
        value = decay.predict(model, age_days, clamp=clamp)
    except UnknownModel as exc:
        _fail(EXIT_CONFIG, f"unknown model: {exc}")
    except WebrotError as exc:
        _fail(EXIT_CONFIG, str(exc))
    if app.fmt == "json":
        click.echo(json.dumps({
            "schema_version": 1,
            "model": decay.model_to_json(model),
            "age_days": age_days,
            "percentage": value,
        }))
    else:
        click.echo(
            f"{model.label.value} (slope={model.slope:g}, intercept={model.intercept:g})"
            f" @ {age_days:g} days -> {value:.2f}%"
        )


@main.command()
@click.argument("csv_path", type=click.Path())
@click.pass_obj
def fit(app: App, csv_path):
    """Least-squares fit of observation CSV (event,age_days,percentage)."""
    try:
        sets = decay.read_observations(csv_path)
        points = tuple(p for obs in sets for p in obs.points)
        model = decay.fit(decay.ObservationSet(points=points))
    except (OSError, KeyError, ValueError, EmptyInput) as exc:
        _fail(EXIT_CONFIG, f"unreadable observations: {exc}")
    except WebrotError as exc:
        _fail(EXIT_CONFIG, str(exc))
    click.echo(json.dumps({"schema_version": 1, **decay.model_to_json(model)}))


@main.group()
def timemap():
    """Fetch, parse and diff Memento TimeMaps."""


@timemap.command("parse")
@click.argument("link_file", type=click.Path())
@click.option("--original", required=True, help="Original URI the TimeMap is for.")
@click.pass_obj
def timemap_parse(app: App, link_file, original):
    """Parse a link-format file into a snapshot JSON document."""
    try:
        body = Path(link_file).read_text(encoding="utf-8")
        tm = archive.parse_timemap(body, canonicalize(original), retrieved_at=app.now())
    except OSError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except (TimeMapParseError, MalformedUri, UnsupportedScheme) as exc:
        _fail(EXIT_CONFIG, str(exc))
    doc = archive.snapshot_to_json(tm)
    try:
        with app.cache() as cache:
            cache.write_json("timemaps", tm.original, doc,
                             suffix=f".{app.now().strftime('%Y%m%dT%H%M%S')}.json")
    except CacheLocked as exc:
        _fail(EXIT_CONFIG, f"cache is locked by another process: {exc}")
    click.echo(json.dumps(doc, indent=2))


@timemap.command("fetch")
@click.argument("uri")
@click.pass_obj
def timemap_fetch(app: App, uri):
    """Fetch the TimeMap for a URI from the configured source."""
    try:
        tm = app.timemap_source().get(canonicalize(uri), retrieved_at=app.now())
    except (MalformedUri, UnsupportedScheme) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except OfflineViolation:
        _fail(EXIT_PROVIDER, "offline mode forbids timemap fetch")
    except Exception as exc:
        _fail(EXIT_PROVIDER, str(exc))
    click.echo(json.dumps(archive.snapshot_to_json(tm), indent=2))


@timemap.command("delta")
@click.argument("old_snapshot", type=click.Path())
@click.argument("new_snapshot", type=click.Path())
@click.pass_obj
def timemap_delta_cmd(app: App, old_snapshot, new_snapshot):
    """Classify the change between two stored snapshots."""
    try:
        old = archive.load_snapshot(old_snapshot)
        new = archive.load_snapshot(new_snapshot)
        delta = archive.timemap_delta(old, new)
    except OSError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except WebrotError as exc:
        _fail(EXIT_CONFIG, str(exc))
    click.echo(json.dumps({
        "schema_version": 1,
        "old_count": delta.old_count,
        "new_count": delta.new_count,
        "kind": delta.kind.value,
    }))


@main.command()
@click.argument("uri")
@click.pass_obj
def mine(app: App, uri):
    """Print the social context summary JSON for a URI."""
    try:
        corpus = social.fetch_corpus(
            app.social_provider(), canonicalize(uri), app.config.corpus_limit
        )
    except (MalformedUri, UnsupportedScheme) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except ProviderUnavailable as exc:
        _fail(EXIT_PROVIDER, f"social provider unavailable: {exc}")
    click.echo(json.dumps(social.summarize_context(corpus).to_json(), indent=2))


@main.command()
@click.argument("uri")
@click.pass_obj
def signature(app: App, uri):
    """Print the tweet signature for a URI."""
    try:
        corpus = social.fetch_corpus(
            app.social_provider(), canonicalize(uri), app.config.corpus_limit
        )
    except (MalformedUri, UnsupportedScheme) as exc:
        _fail(EXIT_CONFIG, str(exc))
    except ProviderUnavailable as exc:
        _fail(EXIT_PROVIDER, f"social provider unavailable: {exc}")
    sig = replace.build_signature(
        social.build_tweet_document(corpus), app.stopwords()
    )
    if app.fmt == "json":
        click.echo(json.dumps({
            "schema_version": 1,
            "terms": list(sig.terms),
            "frequencies": list(sig.frequencies),
        }))
    else:
        click.echo(sig.query())


@main.command()
@click.argument("uri")
@click.option("--output", type=click.Path(), default=None,
              help="Also write the JSON report to this path.")
@click.pass_obj
def recommend(app: App, uri, output):
    """Run the full replacement pipeline and print the report."""
    try:
        target = canonicalize(uri)
    except (MalformedUri, UnsupportedScheme) as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        report = replace.recommend(
            target,
            app.social_provider(),
            app.search_provider(),
            app.fetcher(),
            app.stopwords(),
            corpus_limit=app.config.corpus_limit,
            search_limit=app.config.search_limit,
        )
    except (ProviderUnavailable, OfflineViolation) as exc:
        _fail(EXIT_PROVIDER, f"provider unavailable: {exc}")
    doc = report.to_json()
    try:
        with app.cache() as cache:
            cache.write_json("reports", target, doc)
    except CacheLocked as exc:
        _fail(EXIT_CONFIG, f"cache is locked by another process: {exc}")
    if output:
        Path(output).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    if app.fmt == "json":
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"target:    {report.target}")
        click.echo(f"signature: {report.signature.query() or '(empty)'}")
        if report.best:
            click.echo(
                f"best:      {report.best.uri} "
                f"(similarity {report.best.similarity:.4f}, {report.best.origin.value})"
            )
        else:
            click.echo("best:      none (no rankable candidates)")
        for cand in report.ranked:
            click.echo(
                f"  {cand.similarity:.4f}  {cand.origin.value:<12} {cand.uri}"
            )


@main.command()
@click.argument("dataset_file", type=click.Path())
@click.option("--threshold", type=float, default=None,
              help="Similarity threshold (default from config).")
@click.option("--out-dir", type=click.Path(), default=None,
              help="Directory for summary.json, records.csv, cdf.csv.")
@click.pass_obj
def evaluate(app: App, dataset_file, threshold, out_dir):
    """Run the fixture evaluation protocol over a dataset of URIs."""
    try:
        dataset = evaluation.read_dataset(dataset_file)
    except (OSError, EmptyInput) as exc:
        _fail(EXIT_CONFIG, f"unreadable dataset: {exc}")
    threshold = threshold if threshold is not None else app.config.similarity_threshold
    try:
        records, skipped = evaluation.run_evaluation(
            dataset,
            app.social_provider(),
            app.search_provider(),
            app.fetcher(),
            app.stopwords(),
            min_posts=app.config.min_posts,
            corpus_limit=app.config.corpus_limit,
            search_limit=app.config.search_limit,
        )
    except (ProviderUnavailable, OfflineViolation) as exc:
        _fail(EXIT_PROVIDER, f"provider unavailable: {exc}")
    summary = evaluation.summarize(records, skipped, threshold=threshold)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        evaluation.write_summary_json(summary, out / "summary.json")
        evaluation.write_records_csv(records, out / "records.csv")
        evaluation.write_cdf_csv(summary.similarity_cdf, out / "cdf.csv")
    click.echo(json.dumps(summary.to_json(), indent=2))


if __name__ == "__main__":
    main()
