"""HTTP facade for the labeling protocol, stats, and the browser UI bundle.

A single-process threaded server: the pending-trial registry is shared
across request threads, log writes are funneled through one serialized
writer, and the trial log file is the sole source of truth for stats.
Trial payloads carry raw image bytes over base64 so the client renders the
exact down-sampled grid; they never contain the true label.
"""

import base64
import json
import mimetypes
import re
import threading
from contextlib import contextmanager
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import analytics
from .errors import DomainError, DuplicateResponse, InvalidSelection, UnknownTrial
from .session import Trial, TrialRunner

__all__ = ["DEFAULT_DISPLAY_PX", "DEFAULT_PORT", "LabelService", "create_server", "running_server"]

DEFAULT_PORT = 8377
DEFAULT_DISPLAY_PX = 312  # 3.25 in at the 96 px/in CSS reference density

_SESSION_ID_RE = re.compile(r"[A-Za-z0-9._~-]{1,64}")

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>acuity</title></head>
<body><h1>acuity labeling service</h1>
<p>No UI bundle is installed. API endpoints:</p>
<ul>
<li>GET /api/v1/trial?session={id}</li>
<li>POST /api/v1/response</li>
<li>GET /api/v1/stats?by=resolution|pixels</li>
</ul></body></html>
"""


class LabelService:
    """Request-independent application state behind the HTTP handler."""

    def __init__(
        self,
        runner: TrialRunner | None,
        display_px: int = DEFAULT_DISPLAY_PX,
        static_dir: str | Path | None = None,
    ):
        self.runner = runner
        self.display_px = display_px
        self.static_dir = Path(static_dir) if static_dir else None

    def trial_payload(self, trial: Trial, image) -> dict:
        # Contract: never include true_label or dataset_index.
        return {
            "trial_id": trial.trial_id,
            "width": trial.resolution,
            "pixels_b64": base64.b64encode(image.tobytes()).decode("ascii"),
            "display_px": self.display_px,
        }

    def handle_trial(self, session_id: str | None) -> tuple[int, dict]:
        if not session_id or not _SESSION_ID_RE.fullmatch(session_id):
            return HTTPStatus.BAD_REQUEST, {"error": "malformed session id"}
        if self.runner is None:
            return HTTPStatus.SERVICE_UNAVAILABLE, {"error": "dataset not loaded"}
        trial, image = self.runner.next_trial(session_id)
        return HTTPStatus.OK, self.trial_payload(trial, image)

    def handle_response(self, body: bytes) -> tuple[int, dict]:
        if self.runner is None:
            return HTTPStatus.SERVICE_UNAVAILABLE, {"error": "dataset not loaded"}
        try:
            payload = json.loads(body)
        except json.JSONDecodeError:
            return HTTPStatus.BAD_REQUEST, {"error": "body is not valid JSON"}
        if not isinstance(payload, dict) or not {"trial_id", "selection", "elapsed_ms"} <= set(payload):
            return HTTPStatus.BAD_REQUEST, {"error": "need trial_id, selection, elapsed_ms"}
        try:
            self.runner.record_response(
                str(payload["trial_id"]), payload["selection"], payload["elapsed_ms"]
            )
        except InvalidSelection as exc:
            return HTTPStatus.UNPROCESSABLE_ENTITY, {"error": str(exc)}
        except DomainError as exc:
            return HTTPStatus.UNPROCESSABLE_ENTITY, {"error": str(exc)}
        except UnknownTrial as exc:
            return HTTPStatus.NOT_FOUND, {"error": str(exc)}
        except DuplicateResponse as exc:
            return HTTPStatus.CONFLICT, {"error": str(exc)}
        return HTTPStatus.OK, {"recorded": True}

    def handle_stats(self, by: str, fmt: str) -> tuple[int, dict | str]:
        if by not in ("resolution", "pixels"):
            return HTTPStatus.BAD_REQUEST, {"error": f"unknown aggregation {by!r}"}
        if fmt not in ("json", "csv"):
            return HTTPStatus.BAD_REQUEST, {"error": f"unknown format {fmt!r}"}
        records = self.runner.snapshot_records() if self.runner else []
        if by == "resolution":
            rows = analytics.aggregate_by_resolution(records)
        else:
            rows = analytics.aggregate_by_pixels(records)
        if fmt == "csv":
            return HTTPStatus.OK, analytics.table_to_csv(rows)
        return HTTPStatus.OK, {
            "by": by,
            "rows": [
                {
                    "key": row.key,
                    "trials": row.trials,
                    "errors": row.errors,
                    "error_rate": row.error_rate,
                }
                for row in rows
            ],
        }

    def static_file(self, path: str) -> tuple[bytes, str] | None:
        if self.static_dir is None:
            if path in ("/", "/index.html"):
                return _PLACEHOLDER_PAGE.encode(), "text/html; charset=utf-8"
            return None
        name = "index.html" if path == "/" else path.lstrip("/")
        target = (self.static_dir / name).resolve()
        root = self.static_dir.resolve()
        if root not in target.parents and target != root:
            return None
        if not target.is_file():
            return None
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return target.read_bytes(), ctype


class _Handler(BaseHTTPRequestHandler):
    service: LabelService
    protocol_version = "HTTP/1.1"
    disable_nagle_algorithm = True

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self._send_bytes(status, body, "application/json")

    def _send_bytes(self, status: int, body: bytes, ctype: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        if url.path == "/api/v1/trial":
            session_id = query.get("session", [None])[0]
            status, payload = self.service.handle_trial(session_id)
            self._send_json(status, payload)
        elif url.path == "/api/v1/stats":
            by = query.get("by", ["resolution"])[0]
            fmt = query.get("format", ["json"])[0]
            status, payload = self.service.handle_stats(by, fmt)
            if isinstance(payload, str):
                self._send_bytes(status, payload.encode(), "text/csv; charset=utf-8")
            else:
                self._send_json(status, payload)
        else:
            found = self.service.static_file(url.path)
            if found is None:
                self._send_json(HTTPStatus.NOT_FOUND, {"error": "not found"})
            else:
                body, ctype = found
                self._send_bytes(HTTPStatus.OK, body, ctype)

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/api/v1/response":
            self._send_json(HTTPStatus.NOT_FOUND, {"error": "not found"})
            return
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length)
        status, payload = self.service.handle_response(body)
        self._send_json(status, payload)


class _Server(ThreadingHTTPServer):
    # Request threads must not block shutdown while holding keep-alive
    # connections open.
    daemon_threads = True
    # Default backlog (5) drops connections under concurrent session bursts.
    request_queue_size = 128


def create_server(
    service: LabelService,
    port: int = DEFAULT_PORT,
    host: str = "127.0.0.1",
) -> ThreadingHTTPServer:
    """Build a threaded HTTP server; port 0 picks a free port."""
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return _Server((host, port), handler)


@contextmanager
def running_server(service: LabelService, port: int = 0, host: str = "127.0.0.1"):
    """Serve on a background thread for the duration of the with-block."""
    httpd = create_server(service, port=port, host=host)
    thread = threading.Thread(
        target=lambda: httpd.serve_forever(poll_interval=0.05), daemon=True
    )
    thread.start()
    try:
        yield httpd
    finally:
        httpd.shutdown()
        httpd.server_close()
        thread.join(timeout=5)
