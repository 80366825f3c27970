"""Local HTTP service backing the browser labeling tool.

Serves event images losslessly (base64 of the raw float32 payload) and
persists hand-drawn masks atomically as mask files next to the images.

Routes (JSON bodies):
    GET  /api/events                 -> [{id, width, height, status}, ...]
    GET  /api/events/{id}/image      -> {id, width, height, data_base64, amp_min, amp_max}
    GET  /api/events/{id}/mask       -> {id, width, height, data_base64}
    PUT  /api/events/{id}/mask       <- {width, height, data_base64}
    GET  /...                        -> static UI files when a bundle dir is configured

Mask codes: 0 noise, 1 track, 255 unlabeled. Writes are last-writer-wins,
serialized per event id; image files are never touched.
"""

from __future__ import annotations

import base64
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from .image import LabelMask, load_image, load_mask, save_mask

STATUS_UNLABELED = "unlabeled"
STATUS_PARTIAL = "partial"
STATUS_COMPLETE = "complete"


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class LabelStore:
    """Filesystem-backed event/mask registry used by the HTTP layer."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        if not self.data_dir.is_dir():
            raise NotADirectoryError(f"not a directory: {self.data_dir}")
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, event_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(event_id, threading.Lock())

    def _image_path(self, event_id: str) -> Path:
        return self.data_dir / f"{event_id}.larimg"

    def _mask_path(self, event_id: str) -> Path:
        return self.data_dir / f"{event_id}.larmsk"

    def event_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.larimg"))

    def _require(self, event_id: str) -> Path:
        path = self._image_path(event_id)
        if "/" in event_id or "\\" in event_id or not path.is_file():
            raise ServiceError(404, f"unknown event {event_id!r}")
        return path

    def list_events(self) -> list[dict]:
        records = []
        for event_id in self.event_ids():
            image = load_image(self._image_path(event_id))
            mask_path = self._mask_path(event_id)
            if not mask_path.exists():
                status = STATUS_UNLABELED
            else:
                mask = load_mask(mask_path)
                status = STATUS_PARTIAL if (mask.labels == 255).any() else STATUS_COMPLETE
            records.append(
                {
                    "id": event_id,
                    "width": image.width,
                    "height": image.height,
                    "status": status,
                }
            )
        return records

    def image_payload(self, event_id: str) -> dict:
        image = load_image(self._require(event_id))
        raw = np.ascontiguousarray(image.pixels, dtype="<f4").tobytes()
        return {
            "id": event_id,
            "width": image.width,
            "height": image.height,
            "dtype": "f32le",
            "data_base64": base64.b64encode(raw).decode("ascii"),
            "amp_min": float(image.pixels.min()),
            "amp_max": float(image.pixels.max()),
        }

    def mask_payload(self, event_id: str) -> dict:
        self._require(event_id)
        mask_path = self._mask_path(event_id)
        if not mask_path.exists():
            raise ServiceError(404, f"event {event_id!r} has no mask yet")
        mask = load_mask(mask_path)
        return {
            "id": event_id,
            "width": mask.width,
            "height": mask.height,
            "data_base64": base64.b64encode(mask.labels.tobytes()).decode("ascii"),
        }

    def put_mask(self, event_id: str, doc: dict) -> None:
        image = load_image(self._require(event_id))
        try:
            width = int(doc["width"])
            height = int(doc["height"])
            raw = base64.b64decode(doc["data_base64"], validate=True)
        except (KeyError, TypeError, ValueError) as e:
            raise ServiceError(400, f"malformed mask payload: {e}") from e
        if (height, width) != image.shape:
            raise ServiceError(
                400,
                f"mask is {width}x{height} but event {event_id!r} is "
                f"{image.width}x{image.height}",
            )
        if len(raw) != width * height:
            raise ServiceError(400, f"expected {width * height} bytes, got {len(raw)}")
        arr = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
        try:
            mask = LabelMask(arr)
        except ValueError as e:
            raise ServiceError(400, str(e)) from e
        with self._lock_for(event_id):
            save_mask(mask, self._mask_path(event_id), atomic=True)


class _Handler(BaseHTTPRequestHandler):
    store: LabelStore = None
    static_dir: Path | None = None

    # quiet the default stderr access log
    def log_message(self, fmt, *args):
        pass

    def _send_json(self, doc, status=200):
        blob = json.dumps(doc).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(blob)))
        self.end_headers()
        self.wfile.write(blob)

    def _send_error_json(self, status, message):
        self._send_json({"error": message}, status=status)

    def _route(self):
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        if parts[:1] == ["api"]:
            if parts == ["api", "events"]:
                return ("events", None)
            if len(parts) == 4 and parts[1] == "events" and parts[3] in ("image", "mask"):
                return (parts[3], parts[2])
            raise ServiceError(404, f"no such route: {self.path}")
        return ("static", "/".join(parts) or "index.html")

    def do_GET(self):
        try:
            kind, arg = self._route()
            if kind == "events":
                self._send_json(self.store.list_events())
            elif kind == "image":
                self._send_json(self.store.image_payload(arg))
            elif kind == "mask":
                self._send_json(self.store.mask_payload(arg))
            else:
                self._send_static(arg)
        except ServiceError as e:
            self._send_error_json(e.status, e.message)
        except Exception as e:  # pragma: no cover - defensive
            self._send_error_json(500, f"{type(e).__name__}: {e}")

    def do_PUT(self):
        try:
            kind, arg = self._route()
            if kind != "mask":
                raise ServiceError(405, "PUT is only supported on /api/events/{id}/mask")
            length = int(self.headers.get("Content-Length", 0))
            try:
                doc = json.loads(self.rfile.read(length))
            except json.JSONDecodeError as e:
                raise ServiceError(400, f"body is not valid JSON: {e}") from e
            self.store.put_mask(arg, doc)
            self._send_json({"ok": True})
        except ServiceError as e:
            self._send_error_json(e.status, e.message)
        except Exception as e:  # pragma: no cover - defensive
            self._send_error_json(500, f"{type(e).__name__}: {e}")

    CONTENT_TYPES = {
        ".html": "text/html",
        ".js": "application/javascript",
        ".css": "text/css",
        ".png": "image/png",
        ".map": "application/json",
    }

    def _send_static(self, rel: str):
        if self.static_dir is None:
            if rel == "index.html":
                blob = (
                    b"<html><body><p>larseg labeling service is running. "
                    b"No UI bundle configured; use the JSON API under /api/ or "
                    b"restart with --static pointing at a built frontend.</p></body></html>"
                )
                self.send_response(200)
                self.send_header("Content-Type", "text/html")
                self.send_header("Content-Length", str(len(blob)))
                self.end_headers()
                self.wfile.write(blob)
                return
            raise ServiceError(404, f"no static bundle configured: /{rel}")
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            raise ServiceError(404, f"no such file: /{rel}")
        blob = target.read_bytes()
        self.send_response(200)
        self.send_header(
            "Content-Type", self.CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        )
        self.send_header("Content-Length", str(len(blob)))
        self.end_headers()
        self.wfile.write(blob)


def make_server(data_dir, port: int = 0, static_dir=None) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; port 0 picks a free port."""
    store = LabelStore(data_dir)
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"store": store, "static_dir": Path(static_dir) if static_dir else None},
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(data_dir, port: int, static_dir=None) -> None:
    """Run the labeling service until interrupted."""
    server = make_server(data_dir, port, static_dir)
    host, actual_port = server.server_address
    print(f"serving {Path(data_dir).resolve()} on http://{host}:{actual_port}/", flush=True)
    try:
        server.serve_forever()
    finally:
        server.server_close()
