from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from webrot.archive import (
    DeltaKind,
    FixtureTimeMapSource,
    HttpTimeMapSource,
    Memento,
    TimeMap,
    is_archived,
    load_snapshot,
    parse_timemap,
    serialize_timemap,
    snapshot_from_json,
    snapshot_to_json,
    timemap_delta,
)
from webrot.core import canonicalize
from webrot.errors import MismatchedOriginal, TimeMapParseError

ORIGINAL = "http://example.com/page"
NOW = datetime(2013, 6, 1, tzinfo=timezone.utc)


def read_fixture(fixtures_dir, name):
    return (fixtures_dir / "timemaps" / name).read_text(encoding="utf-8")


class TestParse:
    def test_two_mementos(self, fixtures_dir):
        tm = parse_timemap(read_fixture(fixtures_dir, "two_mementos.link"), ORIGINAL, NOW)
        assert len(tm.mementos) == 2
        assert tm.mementos[0].datetime == datetime(2012, 1, 1, tzinfo=timezone.utc)
        assert tm.mementos[1].datetime == datetime(2013, 1, 1, tzinfo=timezone.utc)
        assert tm.mementos[0].archive_host == "archive-a.example.net"
        assert tm.original == canonicalize(ORIGINAL)
        assert tm.warnings == ()

    def test_self_and_original_links_ignored(self, fixtures_dir):
        tm = parse_timemap(read_fixture(fixtures_dir, "two_mementos.link"), ORIGINAL, NOW)
        hosts = {m.archive_host for m in tm.mementos}
        assert "aggregator.example.net" not in hosts
        assert "example.com" not in hosts

    def test_duplicate_memento_keeps_earliest(self, fixtures_dir):
        tm = parse_timemap(
            read_fixture(fixtures_dir, "duplicate_memento.link"), ORIGINAL, NOW
        )
        assert len(tm.mementos) == 1
        assert tm.mementos[0].datetime == datetime(2012, 1, 1, tzinfo=timezone.utc)

    def test_bad_datetime_warns_not_fails(self, fixtures_dir):
        tm = parse_timemap(read_fixture(fixtures_dir, "bad_datetime.link"), ORIGINAL, NOW)
        assert len(tm.mementos) == 1
        assert len(tm.warnings) == 1
        assert "line 2" in tm.warnings[0]

    def test_empty_body(self):
        tm = parse_timemap("", ORIGINAL, NOW)
        assert tm.mementos == ()

    def test_commas_inside_angle_brackets(self):
        body = (
            '<http://a.example/x,y>; rel="memento"; '
            'datetime="Sun, 01 Jan 2012 00:00:00 GMT"'
        )
        tm = parse_timemap(body, ORIGINAL, NOW)
        assert len(tm.mementos) == 1
        assert tm.mementos[0].memento_uri.path == "/x,y"

    def test_structurally_invalid_entry_raises_with_line(self):
        body = '<http://a.example/x>; rel="memento"; datetime="Sun, 01 Jan 2012 00:00:00 GMT",\nnot-a-link; rel="memento"'
        with pytest.raises(TimeMapParseError) as exc:
            parse_timemap(body, ORIGINAL, NOW)
        assert exc.value.line == 2

    def test_mementos_sorted_ascending(self):
        body = (
            '<http://b.example/2>; rel="memento"; datetime="Tue, 01 Jan 2013 00:00:00 GMT",\n'
            '<http://a.example/1>; rel="memento"; datetime="Sun, 01 Jan 2012 00:00:00 GMT"'
        )
        tm = parse_timemap(body, ORIGINAL, NOW)
        dts = [m.datetime for m in tm.mementos]
        assert dts == sorted(dts)


class TestRoundTrip:
    def test_parse_serialize_parse(self, fixtures_dir):
        first = parse_timemap(read_fixture(fixtures_dir, "two_mementos.link"), ORIGINAL, NOW)
        second = parse_timemap(serialize_timemap(first), ORIGINAL, NOW)
        assert second.mementos == first.mementos
        assert second.original == first.original

    def test_snapshot_json_round_trip(self, fixtures_dir):
        tm = parse_timemap(read_fixture(fixtures_dir, "two_mementos.link"), ORIGINAL, NOW)
        again = snapshot_from_json(snapshot_to_json(tm))
        assert again == tm

    def test_snapshot_file_round_trip(self, tmp_path, fixtures_dir):
        import json

        tm = parse_timemap(read_fixture(fixtures_dir, "one_memento.link"),
                           "http://example.com/fading", NOW)
        path = tmp_path / "snap.json"
        path.write_text(json.dumps(snapshot_to_json(tm)), encoding="utf-8")
        assert load_snapshot(path) == tm


def _tm(count, original=ORIGINAL):
    mementos = tuple(
        Memento(
            memento_uri=canonicalize(f"http://arch.example.net/{i}"),
            datetime=datetime(2012, 1, 1 + i, tzinfo=timezone.utc),
            archive_host="arch.example.net",
        )
        for i in range(count)
    )
    return TimeMap(original=canonicalize(original), mementos=mementos, retrieved_at=NOW)


class TestArchivedAndDelta:
    def test_is_archived(self):
        assert not is_archived(_tm(0))
        assert is_archived(_tm(1))
        assert is_archived(_tm(5))

    @pytest.mark.parametrize(
        "old,new,kind",
        [
            (0, 0, DeltaKind.STABLE),
            (2, 2, DeltaKind.STABLE),
            (1, 3, DeltaKind.GREW),
            (3, 2, DeltaKind.SHRANK),
            (2, 0, DeltaKind.SHRANK),
            (1, 0, DeltaKind.ONE_TO_ZERO),
        ],
    )
    def test_delta_kinds(self, old, new, kind):
        delta = timemap_delta(_tm(old), _tm(new))
        assert delta.kind is kind
        assert (delta.old_count, delta.new_count) == (old, new)

    def test_mismatched_original(self):
        with pytest.raises(MismatchedOriginal):
            timemap_delta(_tm(1), _tm(1, original="http://other.example/"))

    @given(st.integers(0, 6), st.integers(0, 6))
    def test_one_to_zero_only_for_exact_pair(self, old, new):
        kind = timemap_delta(_tm(old), _tm(new)).kind
        assert (kind is DeltaKind.ONE_TO_ZERO) == (old == 1 and new == 0)


class TestSources:
    def test_fixture_source_reads_key_file(self, tmp_path):
        from webrot.cache import uri_key

        uri = canonicalize(ORIGINAL)
        body = (
            '<http://arch.example.net/1>; rel="memento"; '
            'datetime="Sun, 01 Jan 2012 00:00:00 GMT"'
        )
        (tmp_path / f"{uri_key(uri)}.link").write_text(body, encoding="utf-8")
        tm = FixtureTimeMapSource(tmp_path).get(uri, retrieved_at=NOW)
        assert len(tm.mementos) == 1

    def test_fixture_source_missing_file_means_unarchived(self, tmp_path):
        tm = FixtureTimeMapSource(tmp_path).get(canonicalize(ORIGINAL), retrieved_at=NOW)
        assert not is_archived(tm)

    def test_http_source_url_template(self):
        calls = []

        class StubClient:
            def get(self, url, timeout, headers):
                calls.append(url)

                class R:
                    status_code = 200
                    text = ""

                return R()

        source = HttpTimeMapSource("http://agg.example.net/", StubClient())
        source.get(canonicalize(ORIGINAL), retrieved_at=NOW)
        assert calls == ["http://agg.example.net/timemap/link/http://example.com/page"]
