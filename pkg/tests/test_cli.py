import json

import pytest
from click.testing import CliRunner

from conftest import FIXTURES, INTEGRATION_TARGET
from webrot.cache import uri_key
from webrot.cli import main
from webrot.core import canonicalize

runner = CliRunner()


def invoke(*args, config=None):
    argv = []
    if config:
        argv += ["--config", config]
    argv += list(args)
    return runner.invoke(main, argv, catch_exceptions=False)


class TestConfig:
    def test_missing_config_file(self):
        result = invoke("predict", "content-lost", "365", config="/nope/config.json")
        assert result.exit_code == 2
        assert "error:" in result.output

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"not_a_key": 1}')
        result = invoke("predict", "content-lost", "365", config=str(path))
        assert result.exit_code == 2

    def test_dangling_fixture_path_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"social_fixture": "absent.jsonl"}')
        result = invoke("mine", "http://x.example/", config=str(path))
        assert result.exit_code == 2

    def test_relative_paths_resolved_against_config_dir(self, fixtures_dir):
        result = invoke(
            "--format", "json", "signature", INTEGRATION_TARGET,
            config=str(fixtures_dir / "config.sample.json"),
        )
        assert result.exit_code == 0

    def test_bad_fixed_clock(self):
        result = runner.invoke(
            main, ["--fixed-clock", "not-a-time", "predict", "content-lost", "1"]
        )
        assert result.exit_code == 2


class TestPredict:
    def test_builtin_model_text(self):
        result = invoke("predict", "content-lost", "365")
        assert result.exit_code == 0
        assert "11.50%" in result.output

    def test_builtin_model_json(self):
        result = invoke("--format", "json", "predict", "content-archived", "0")
        doc = json.loads(result.output)
        assert doc["percentage"] == 6.74
        assert doc["schema_version"] == 1

    def test_unknown_model(self):
        result = invoke("predict", "no-such-model", "10")
        assert result.exit_code == 2

    def test_negative_age(self):
        result = invoke("predict", "content-lost", "--", "-5")
        assert result.exit_code == 2

    def test_clamp_flag(self):
        result = invoke("--format", "json", "predict", "reappearing", "0", "--clamp")
        assert json.loads(result.output)["percentage"] == 0.0

    def test_fitted_model_file(self, tmp_path):
        model = tmp_path / "model.json"
        model.write_text('{"slope": 1.0, "intercept": 2.0}')
        result = invoke("--format", "json", "predict", str(model), "3")
        assert json.loads(result.output)["percentage"] == 5.0


class TestFit:
    def test_fit_csv(self, tmp_path):
        csv_path = tmp_path / "obs.csv"
        csv_path.write_text(
            "event,age_days,percentage\ne,0,1\ne,1,3\ne,2,5\ne,3,8\n"
        )
        result = invoke("fit", str(csv_path))
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["slope"] == pytest.approx(2.3)
        assert doc["intercept"] == pytest.approx(0.8)

    def test_fit_missing_file(self, tmp_path):
        result = invoke("fit", str(tmp_path / "absent.csv"))
        assert result.exit_code == 2

    def test_fit_degenerate(self, tmp_path):
        csv_path = tmp_path / "obs.csv"
        csv_path.write_text("event,age_days,percentage\ne,5,1\ne,5,2\n")
        result = invoke("fit", str(csv_path))
        assert result.exit_code == 2


class TestTimemap:
    def test_parse(self, cli_config, fixtures_dir):
        result = invoke(
            "timemap", "parse", str(fixtures_dir / "timemaps" / "two_mementos.link"),
            "--original", "http://example.com/page",
            config=cli_config(),
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert len(doc["mementos"]) == 2
        assert doc["schema_version"] == 1

    def test_fetch_from_fixture_dir(self, cli_config, tmp_path):
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        uri = canonicalize("http://example.com/page")
        (tm_dir / f"{uri_key(uri)}.link").write_text(
            '<http://arch.example.net/1>; rel="memento"; '
            'datetime="Sun, 01 Jan 2012 00:00:00 GMT"'
        )
        result = invoke(
            "timemap", "fetch", str(uri),
            config=cli_config(timemap_fixture_dir=str(tm_dir)),
        )
        assert result.exit_code == 0
        assert len(json.loads(result.output)["mementos"]) == 1

    def test_delta_one_to_zero(self, cli_config, tmp_path, fixtures_dir):
        old = invoke(
            "timemap", "parse", str(fixtures_dir / "timemaps" / "one_memento.link"),
            "--original", "http://example.com/fading",
            config=cli_config(),
        )
        new = invoke(
            "timemap", "parse", str(fixtures_dir / "timemaps" / "zero_mementos.link"),
            "--original", "http://example.com/fading",
            config=cli_config(),
        )
        old_path = tmp_path / "old.json"
        new_path = tmp_path / "new.json"
        old_path.write_text(old.output)
        new_path.write_text(new.output)
        result = invoke("timemap", "delta", str(old_path), str(new_path),
                        config=cli_config())
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["kind"] == "OneToZero"
        assert (doc["old_count"], doc["new_count"]) == (1, 0)

    def test_parse_garbage_file(self, cli_config, tmp_path):
        bad = tmp_path / "bad.link"
        bad.write_text('no-angle-brackets; rel="memento"')
        result = invoke("timemap", "parse", str(bad),
                        "--original", "http://example.com/x", config=cli_config())
        assert result.exit_code == 2


class TestCheck:
    def test_live_and_archived(self, cli_config, tmp_path, ok_server):
        target = f"{ok_server}/target"
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        (tm_dir / f"{uri_key(canonicalize(target))}.link").write_text(
            '<http://arch.example.net/1>; rel="memento"; '
            'datetime="Sun, 01 Jan 2012 00:00:00 GMT"'
        )
        result = invoke(
            "--format", "json", "check", target,
            config=cli_config(timemap_fixture_dir=str(tm_dir)),
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["status"] == "Replicated"
        assert doc["live"] is True and doc["archived"] is True

    def test_missing_and_unarchived(self, cli_config, tmp_path, ok_server):
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        result = invoke(
            "--format", "json", "check", f"{ok_server}/gone",
            config=cli_config(timemap_fixture_dir=str(tm_dir)),
        )
        doc = json.loads(result.output)
        assert doc["status"] == "Unrecoverable"
        assert doc["verdict"].startswith("Missing")

    def test_invalid_uri_reported_not_fatal(self, cli_config, tmp_path, ok_server):
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        result = invoke(
            "--format", "json", "check", "notauri",
            config=cli_config(timemap_fixture_dir=str(tm_dir)),
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["status"] == "Uncertain"
        assert "invalid" in doc["verdict"]

    def test_offline_probe_forbidden(self, cli_config, tmp_path):
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        result = invoke(
            "--offline", "check", "http://example.com/x",
            config=cli_config(timemap_fixture_dir=str(tm_dir)),
        )
        assert result.exit_code == 3

    def test_probe_results_cached(self, cli_config, tmp_path, ok_server):
        target = f"{ok_server}/target"
        tm_dir = tmp_path / "tms"
        tm_dir.mkdir()
        invoke("check", target, config=cli_config(timemap_fixture_dir=str(tm_dir)))
        probes = list((tmp_path / "cache" / "probes").glob("*.jsonl"))
        reports = list((tmp_path / "cache" / "reports").glob("*.jsonl"))
        assert len(probes) == 1
        assert len(reports) == 1
        record = json.loads(probes[0].read_text().splitlines()[0])
        assert record["schema_version"] == 1


class TestMineAndSignature:
    def test_mine_json_keys(self, cli_config):
        result = invoke("mine", INTEGRATION_TARGET, config=cli_config())
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["Related Tweet Count"] == 37
        assert "The longest common phrase appearing" in doc

    def test_signature_text(self, cli_config):
        result = invoke("signature", INTEGRATION_TARGET, config=cli_config())
        assert result.output.strip() == "egypt revolut coverag forev lost"

    def test_signature_json(self, cli_config):
        result = invoke("--format", "json", "signature", INTEGRATION_TARGET,
                        config=cli_config())
        doc = json.loads(result.output)
        assert doc["terms"] == ["egypt", "revolut", "coverag", "forev", "lost"]
        assert doc["frequencies"] == [29, 22, 12, 12, 12]

    def test_mine_without_provider_is_exit_3(self, cli_config):
        result = invoke("mine", INTEGRATION_TARGET,
                        config=cli_config(social_fixture=None))
        assert result.exit_code == 3

    def test_mine_bad_uri(self, cli_config):
        result = invoke("mine", "notauri", config=cli_config())
        assert result.exit_code == 2


class TestRecommend:
    def test_offline_fixture_run(self, cli_config, tmp_path):
        out = tmp_path / "report.json"
        result = invoke(
            "--offline", "--format", "json", "recommend", INTEGRATION_TARGET,
            "--output", str(out),
            config=cli_config(),
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["best"]["uri"] == "http://pages.example.com/best-match"
        assert json.loads(out.read_text()) == doc

    def test_report_cached(self, cli_config, tmp_path):
        invoke("recommend", INTEGRATION_TARGET, config=cli_config())
        reports = list((tmp_path / "cache" / "reports").glob("*.json"))
        assert len(reports) == 1

    def test_text_format_mentions_best(self, cli_config):
        result = invoke("recommend", INTEGRATION_TARGET, config=cli_config())
        assert "best:" in result.output
        assert "best-match" in result.output

    def test_no_search_provider_is_exit_3(self, cli_config):
        result = invoke("recommend", INTEGRATION_TARGET,
                        config=cli_config(search_fixture=None))
        assert result.exit_code == 3


class TestEvaluate:
    def test_full_run_with_outputs(self, cli_config, tmp_path, fixtures_dir):
        out_dir = tmp_path / "eval"
        result = invoke(
            "evaluate", str(fixtures_dir / "dataset.txt"),
            "--out-dir", str(out_dir),
            config=cli_config(),
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["n"] == 5
        assert doc["mrr"] == pytest.approx((1 + 1/2 + 1/4 + 1/5 + 1/3) / 5)
        assert doc["skipped"] == {"below-min-posts": 1}
        assert (out_dir / "summary.json").is_file()
        assert (out_dir / "records.csv").is_file()
        assert (out_dir / "cdf.csv").is_file()

    def test_threshold_override(self, cli_config, fixtures_dir):
        result = invoke(
            "evaluate", str(fixtures_dir / "dataset.txt"), "--threshold", "0.99",
            config=cli_config(),
        )
        doc = json.loads(result.output)
        assert doc["threshold"] == 0.99

    def test_below_min_posts_dataset_all_skipped(self, cli_config, fixtures_dir):
        result = invoke(
            "evaluate", str(fixtures_dir / "dataset_below30.txt"),
            config=cli_config(),
        )
        doc = json.loads(result.output)
        assert doc["n"] == 0
        assert doc["skipped"] == {"below-min-posts": 1}

    def test_empty_dataset_is_exit_2(self, cli_config, tmp_path):
        ds = tmp_path / "empty.txt"
        ds.write_text("# nothing\n")
        result = invoke("evaluate", str(ds), config=cli_config())
        assert result.exit_code == 2
