import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from webrot.replace import FixtureFetcher, JsonSearchProvider
from webrot.social import JsonlSocialProvider
from webrot.textpipe import default_stopwords

DATA = Path(__file__).parent / "data"
FIXTURES = DATA / "fixtures"

SHOWCASE_TARGET = "http://blog.example.net/2012/02/revolution-year.html"
INTEGRATION_TARGET = "http://news.example.org/egypt-revolution-coverage"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture(scope="session")
def social_provider():
    return JsonlSocialProvider(FIXTURES / "social.jsonl")


@pytest.fixture(scope="session")
def search_provider():
    return JsonSearchProvider(FIXTURES / "search.json")


@pytest.fixture(scope="session")
def fetcher():
    return FixtureFetcher(FIXTURES / "pages" / "pages.json")


class _Handler(BaseHTTPRequestHandler):
    # behaviour table set per server instance
    behaviour = "ok"

    def log_message(self, *args):
        pass

    def _send(self, status, body=b"", headers=()):
        self.send_response(status)
        for k, v in headers:
            self.send_header(k, v)
        self.send_header("Content-Type", "text/html")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        mode = self.server.behaviour
        if mode == "ok":
            if self.path == "/target":
                self._send(200, b"<html><body><p>"
                           b"A unique article about the Egyptian revolution and the "
                           b"archives of shared resources on the social web today."
                           b"</p></body></html>")
            elif self.path == "/redir":
                self._send(302, headers=[("Location", "/target")])
            elif self.path == "/loop":
                self._send(301, headers=[("Location", "/loop")])
            else:
                self._send(404, b"<html><body>not found</body></html>")
        elif mode == "soft404":
            # identical "not found" page with 200 for every path
            self._send(200, b"<html><body><h1>Page not found</h1><p>"
                       b"Sorry the page you requested could not be found on "
                       b"this site please check the address and try again."
                       b"</p></body></html>")
        elif mode == "redirect-error-page":
            if self.path == "/errorpage":
                self._send(200, b"<html><body>error landing page</body></html>")
            else:
                self._send(301, headers=[("Location", "/errorpage")])
        else:
            self._send(500)


def _make_server(behaviour):
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.behaviour = behaviour
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


@pytest.fixture(scope="session")
def ok_server():
    server = _make_server("ok")
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


@pytest.fixture(scope="session")
def soft404_server():
    server = _make_server("soft404")
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


@pytest.fixture(scope="session")
def redirect_error_server():
    server = _make_server("redirect-error-page")
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


@pytest.fixture
def cli_config(tmp_path):
    """Write a CLI config pointing at the shared fixtures, cache in tmp."""
    def _write(**overrides):
        doc = {
            "cache_dir": str(tmp_path / "cache"),
            "social_fixture": str(FIXTURES / "social.jsonl"),
            "search_fixture": str(FIXTURES / "search.json"),
            "pages_fixture": str(FIXTURES / "pages" / "pages.json"),
            "timemap_fixture_dir": str(FIXTURES / "timemaps"),
            "per_host_delay": 0.0,
            "repeat_count": 1,
        }
        doc.update(overrides)
        doc = {k: v for k, v in doc.items() if v is not None}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return _write
