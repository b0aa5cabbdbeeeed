"""Static HTTP server for the player: assets, manifest, and range-capable video."""

from __future__ import annotations

import logging
import mimetypes
import os
import re
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

log = logging.getLogger("vguide.serve")

_RANGE = re.compile(r"bytes=(\d*)-(\d*)$")


class PlayerHandler(BaseHTTPRequestHandler):
    manifest_path: str = ""
    video_path: str = ""
    assets_dir: str | None = None

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.info("%s %s", self.address_string(), fmt % args)

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/api/manifest":
            self._send_file(self.manifest_path, "application/json")
        elif path == "/media/video":
            self._send_file(self.video_path, ranged=True)
        else:
            self._send_asset(path)

    def _send_asset(self, path: str):
        if self.assets_dir is None:
            self.send_error(HTTPStatus.NOT_FOUND)
            return
        if path.endswith("/"):
            path += "index.html"
        rel = os.path.normpath(path.lstrip("/"))
        full = os.path.join(self.assets_dir, rel)
        if rel.startswith("..") or not os.path.isfile(full):
            self.send_error(HTTPStatus.NOT_FOUND)
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        self._send_file(full, ctype)

    def _send_file(self, path: str, ctype: str | None = None, ranged: bool = False):
        if not os.path.isfile(path):
            self.send_error(HTTPStatus.NOT_FOUND)
            return
        size = os.path.getsize(path)
        ctype = ctype or mimetypes.guess_type(path)[0] or "application/octet-stream"
        start, end = 0, size - 1
        status = HTTPStatus.OK
        range_header = self.headers.get("Range") if ranged else None
        if range_header:
            m = _RANGE.match(range_header.strip())
            if not m or (not m.group(1) and not m.group(2)):
                self.send_error(HTTPStatus.BAD_REQUEST, "malformed Range header")
                return
            if m.group(1):
                start = int(m.group(1))
                if m.group(2):
                    end = min(int(m.group(2)), size - 1)
            else:
                # suffix range: last N bytes
                start = max(0, size - int(m.group(2)))
            if start >= size or start > end:
                self.send_response(HTTPStatus.REQUESTED_RANGE_NOT_SATISFIABLE)
                self.send_header("Content-Range", f"bytes */{size}")
                self.send_header("Content-Length", "0")
                self.end_headers()
                return
            status = HTTPStatus.PARTIAL_CONTENT

        length = end - start + 1
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(length))
        self.send_header("Accept-Ranges", "bytes")
        if status == HTTPStatus.PARTIAL_CONTENT:
            self.send_header("Content-Range", f"bytes {start}-{end}/{size}")
        self.end_headers()
        with open(path, "rb") as fh:
            fh.seek(start)
            remaining = length
            while remaining > 0:
                chunk = fh.read(min(65536, remaining))
                if not chunk:
                    break
                self.wfile.write(chunk)
                remaining -= len(chunk)


def make_server(manifest_path: str, video_path: str, assets_dir: str | None,
                port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (PlayerHandler,), {
        "manifest_path": manifest_path,
        "video_path": video_path,
        "assets_dir": assets_dir,
    })
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(server: ThreadingHTTPServer):
    try:
        log.info("serving on http://%s:%d/", *server.server_address)
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("interrupt, shutting down")
    finally:
        server.server_close()
