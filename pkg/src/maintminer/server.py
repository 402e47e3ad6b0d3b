"""Read-only local HTTP server for an exported analytics bundle.

Serves the JSON bundle, windowed profile series re-bucketed from the
bundle's per-day granularity, and byte-identical CSV downloads.  Never
writes; safe for concurrent readers.
"""

from __future__ import annotations

import json
import logging
from datetime import date
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

log = logging.getLogger(__name__)

SUPPORTED_SCHEMA_VERSIONS = {1}


class BundleError(Exception):
    """The bundle directory is missing or not supported."""


def _day_number(iso: str) -> int:
    return date.fromisoformat(iso).toordinal()


def window_series(
    daily: list,
    window_days: int,
    project: Optional[str] = None,
    developer_email: Optional[str] = None,
    developer_name: Optional[str] = None,
    date_from: Optional[str] = None,
    date_to: Optional[str] = None,
) -> list:
    """Bucket per-day rows into windows anchored at the range start."""
    rows = [
        r
        for r in daily
        if (project is None or r["project"] == project)
        and (developer_email is None or r["developer_email"] == developer_email)
        and (developer_name is None or r["developer_name"] == developer_name)
        and (date_from is None or r["date"] >= date_from)
        and (date_to is None or r["date"] <= date_to)
    ]
    if not rows:
        return []
    start = _day_number(date_from) if date_from else min(_day_number(r["date"]) for r in rows)
    buckets: dict = {}
    for r in rows:
        idx = (_day_number(r["date"]) - start) // window_days
        b = buckets.setdefault(idx, {"corrective": 0, "perfective": 0, "adaptive": 0})
        for k in ("corrective", "perfective", "adaptive"):
            b[k] += r[k]
    out = []
    for idx in sorted(buckets):
        b = buckets[idx]
        out.append(
            {
                "window_start": date.fromordinal(start + idx * window_days).isoformat(),
                "window_days": window_days,
                **b,
            }
        )
    return out


class _Handler(BaseHTTPRequestHandler):
    bundle: dict = {}
    bundle_dir: Path = Path(".")

    def log_message(self, fmt, *args):  # route through logging, not stderr
        log.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, doc, status: int = 200) -> None:
        self._send(status, json.dumps(doc).encode("utf-8"), "application/json")

    def _error(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status=status)

    def do_GET(self):  # noqa: N802 (http.server API)
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        if url.path == "/api/bundle":
            self._send_json(self.bundle)
        elif url.path == "/api/profiles":
            try:
                window = int(query.get("window", self.bundle.get("window_days") or 28))
                if window <= 0:
                    raise ValueError
            except ValueError:
                return self._error(400, "window must be a positive integer")
            series = window_series(
                self.bundle.get("daily", []),
                window,
                project=query.get("project"),
                developer_email=query.get("developer_email"),
                developer_name=query.get("developer_name"),
                date_from=query.get("from"),
                date_to=query.get("to"),
            )
            self._send_json({"window_days": window, "series": series})
        elif url.path == "/api/homogeneity":
            self._send_json(self.bundle.get("homogeneity", []))
        elif url.path.startswith("/api/datasets/"):
            name = Path(url.path[len("/api/datasets/") :]).name  # no traversal
            target = self.bundle_dir / name
            if not target.is_file():
                return self._error(404, f"no such dataset: {name}")
            data = target.read_bytes()
            kind = "text/csv" if name.endswith(".csv") else "application/octet-stream"
            self._send(200, data, kind)
        else:
            self._error(404, f"unknown route: {url.path}")


def serve_bundle(bundle_dir, port: int) -> ThreadingHTTPServer:
    """Build the server; the caller decides when to serve_forever()."""
    bundle_dir = Path(bundle_dir)
    bundle_path = bundle_dir / "bundle.json"
    if not bundle_path.is_file():
        raise BundleError(f"no bundle.json under {bundle_dir}")
    bundle = json.loads(bundle_path.read_text(encoding="utf-8"))
    version = bundle.get("schema_version")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise BundleError(f"unsupported bundle schema_version: {version}")

    handler = type("BoundHandler", (_Handler,), {"bundle": bundle, "bundle_dir": bundle_dir})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
