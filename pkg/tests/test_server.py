from __future__ import annotations

import hashlib
import json
import threading
from urllib.error import HTTPError
from urllib.request import urlopen

import pytest

from maintminer.activity import Activity
from maintminer.analytics import aggregate, daily_series, detect_homogeneous, export_views
from maintminer.server import BundleError, serve_bundle, window_series

from conftest import classified


@pytest.fixture
def bundle_dir(tmp_path, synthetic_classified_corpus):
    commits = synthetic_classified_corpus
    profiles = aggregate(commits, "window", window_days=28)
    paths = export_views(
        profiles, detect_homogeneous(commits), tmp_path / "bundle",
        daily=daily_series(commits), window_days=28,
    )
    # a second CSV download target
    (tmp_path / "bundle" / "labeled.csv").write_text("a,b\n1,2\n", encoding="utf-8")
    return paths["bundle"].parent


@pytest.fixture
def server(bundle_dir):
    srv = serve_bundle(bundle_dir, 0)  # ephemeral port
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}", bundle_dir
    srv.shutdown()
    srv.server_close()


def _get(url):
    with urlopen(url) as resp:
        return resp.status, resp.read()


def test_bundle_errors(tmp_path):
    with pytest.raises(BundleError):
        serve_bundle(tmp_path / "nope", 0)
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "bundle.json").write_text('{"schema_version": 99}', encoding="utf-8")
    with pytest.raises(BundleError):
        serve_bundle(bad, 0)


def test_profiles_endpoint(server):
    base, _ = server
    status, body = _get(f"{base}/api/profiles?project=proj1&window=28")
    assert status == 200
    doc = json.loads(body)
    assert doc["window_days"] == 28
    assert doc["series"], "project series present"
    for row in doc["series"]:
        assert set(row) == {"window_start", "window_days", "corrective", "perfective", "adaptive"}


def test_profiles_rebucketing_conserves(server):
    base, _ = server
    totals = {}
    for window in (7, 28, 90):
        doc = json.loads(_get(f"{base}/api/profiles?window={window}")[1])
        totals[window] = {
            k: sum(r[k] for r in doc["series"])
            for k in ("corrective", "perfective", "adaptive")
        }
    assert totals[7] == totals[28] == totals[90]


def test_csv_download_byte_identical(server):
    base, bundle_dir = server
    for name in ("profiles.csv", "labeled.csv"):
        _, body = _get(f"{base}/api/datasets/{name}")
        disk = (bundle_dir / name).read_bytes()
        assert hashlib.sha256(body).hexdigest() == hashlib.sha256(disk).hexdigest()


def test_unknown_route_is_json_404(server):
    base, _ = server
    with pytest.raises(HTTPError) as err:
        _get(f"{base}/api/nope")
    assert err.value.code == 404
    assert json.loads(err.value.read())["error"].startswith("unknown route")
    with pytest.raises(HTTPError) as err:
        _get(f"{base}/api/datasets/missing.csv")
    assert err.value.code == 404


def test_server_never_mutates_bundle(server):
    base, bundle_dir = server
    before = {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in bundle_dir.iterdir() if p.is_file()
    }
    for _ in range(40):  # request storm
        _get(f"{base}/api/bundle")
        _get(f"{base}/api/profiles?window=7")
        _get(f"{base}/api/datasets/profiles.csv")
    after = {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in bundle_dir.iterdir() if p.is_file()
    }
    assert before == after


def test_window_series_helper():
    daily = [
        {"project": "p", "developer_email": "d@x", "developer_name": "d",
         "date": "2016-03-01", "corrective": 2, "perfective": 0, "adaptive": 1},
        {"project": "p", "developer_email": "d@x", "developer_name": "d",
         "date": "2016-03-30", "corrective": 1, "perfective": 3, "adaptive": 0},
    ]
    series = window_series(daily, 28)
    assert len(series) == 2
    assert series[0]["corrective"] == 2 and series[1]["perfective"] == 3
    merged = window_series(daily, 90)
    assert len(merged) == 1
    assert merged[0]["adaptive"] == 1
