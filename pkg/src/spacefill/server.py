"""Read-only HTTP service over a generated artifact directory.

Serves JSON endpoints for the viewer: /api/meta, /api/curve, /api/values,
/api/slice?z=k, plus static assets.  Responses are computed from immutable
artifacts loaded at startup, so concurrent reads are safe and repeatable.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .curve import read_curve
from .errors import SpacefillError
from .field import load_scalar_field
from .tree import read_tree

__all__ = ["ArtifactStore", "serve_artifacts", "make_server"]

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>spacefill</title></head>
<body><h1>spacefill artifact server</h1>
<p>No viewer assets found. The JSON API lives under <code>/api/</code>:
<a href="/api/meta">meta</a>, <a href="/api/curve">curve</a>,
<a href="/api/values">values</a>, <a href="/api/slice">slice</a>.</p>
</body></html>
"""


class ArtifactStore:
    """Artifacts from a ``gen`` output directory, loaded once."""

    def __init__(self, directory):
        self.dir = Path(directory)
        if not self.dir.is_dir():
            raise SpacefillError(f"artifact directory not found: {self.dir}")
        self.manifest = None
        manifest_path = self.dir / "manifest.json"
        if manifest_path.is_file():
            self.manifest = json.loads(manifest_path.read_text())
        self.curve = None
        if (self.dir / "curve.txt").is_file():
            self.curve = read_curve(self.dir / "curve.txt")
        self.field = None
        if (self.dir / "field.json").is_file():
            self.field = load_scalar_field(self.dir / "field.json")
        self.tree = None
        if (self.dir / "tree.txt").is_file():
            self.tree = read_tree(self.dir / "tree.txt")
        self.bands = None
        if (self.dir / "bands.json").is_file():
            self.bands = json.loads((self.dir / "bands.json").read_text())
        self.values = None
        if (self.dir / "values.csv").is_file():
            self.values = self._read_values(self.dir / "values.csv")

    @staticmethod
    def _read_values(path: Path):
        lines = path.read_text().strip().splitlines()
        header = lines[0].split(",")
        cols = {name: [] for name in header}
        for line in lines[1:]:
            for name, cell in zip(header, line.split(",")):
                cols[name].append(float(cell))
        return cols

    def meta(self) -> dict:
        if self.curve is None:
            raise KeyError("curve")
        return {
            "dims": list(self.curve.dims),
            "method": self.curve.method,
            "alpha": self.curve.alpha,
            "levels": self.curve.max_level,
            "count": len(self.curve),
            "ensemble": self.bands is not None,
        }

    def curve_payload(self) -> dict:
        if self.curve is None:
            raise KeyError("curve")
        xs, ys, zs, levels = [], [], [], []
        exs, eys, ezs = [], [], []
        for step in self.curve.steps:
            c = step.coord
            xs.append(c[0])
            ys.append(c[1])
            zs.append(c[2] if len(c) == 3 else 0)
            levels.append(step.level)
            if step.level > 1 and self.tree is not None:
                leaf = self.tree.leaf_at(step.coord)
                ext = leaf.extent + (1,) * (3 - len(leaf.extent))
            else:
                ext = (1, 1, 1)
            exs.append(ext[0])
            eys.append(ext[1])
            ezs.append(ext[2])
        return {
            "x": xs,
            "y": ys,
            "z": zs,
            "level": levels,
            "ex": exs,
            "ey": eys,
            "ez": ezs,
        }

    def values_payload(self) -> dict:
        if self.values is None:
            raise KeyError("values")
        out = {"u": self.values.get("u", [])}
        out["t"] = self.values.get("t")
        out["bands"] = self.bands
        return out

    def slice_payload(self, z: int | None) -> dict:
        if self.field is None:
            raise KeyError("field")
        dims = self.field.dims
        arr = self.field.as_array()
        if len(dims) == 2:
            if z not in (None, 0):
                raise ValueError("2D dataset has one slice")
            return {"z": 0, "dims": [dims[0], dims[1]], "values": arr.ravel().tolist()}
        z = 0 if z is None else int(z)
        if not 0 <= z < dims[2]:
            raise ValueError(f"z={z} outside 0..{dims[2] - 1}")
        return {"z": z, "dims": [dims[0], dims[1]], "values": arr[z].ravel().tolist()}


class _Handler(BaseHTTPRequestHandler):
    store: ArtifactStore
    static_dir: Path | None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, payload, status: int = 200) -> None:
        body = json.dumps(payload, sort_keys=True).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status=status)

    def do_GET(self):  # noqa: N802 - http.server API
        parsed = urlparse(self.path)
        route = parsed.path
        try:
            if route == "/api/meta":
                self._send_json(self.store.meta())
            elif route == "/api/curve":
                self._send_json(self.store.curve_payload())
            elif route == "/api/values":
                self._send_json(self.store.values_payload())
            elif route == "/api/slice":
                qs = parse_qs(parsed.query)
                z = int(qs["z"][0]) if "z" in qs else None
                self._send_json(self.store.slice_payload(z))
            elif route.startswith("/api/"):
                self._send_error_json(404, f"unknown endpoint {route}")
            else:
                self._serve_static(route)
        except KeyError as exc:
            self._send_error_json(404, f"artifact not available: {exc}")
        except ValueError as exc:
            self._send_error_json(400, str(exc))

    def _serve_static(self, route: str) -> None:
        if route in ("", "/"):
            route = "/index.html"
        if self.static_dir is not None:
            target = (self.static_dir / route.lstrip("/")).resolve()
            if target.is_file() and self.static_dir.resolve() in target.parents:
                ctypes = {
                    ".html": "text/html",
                    ".js": "text/javascript",
                    ".css": "text/css",
                    ".svg": "image/svg+xml",
                    ".json": "application/json",
                }
                body = target.read_bytes()
                self.send_response(200)
                self.send_header(
                    "Content-Type", ctypes.get(target.suffix, "application/octet-stream")
                )
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
        if route == "/index.html":
            body = _FALLBACK_PAGE.encode()
            self.send_response(200)
            self.send_header("Content-Type", "text/html")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self._send_error_json(404, f"no such file {route}")


def make_server(
    directory, host: str = "127.0.0.1", port: int = 8000, static_dir=None
) -> ThreadingHTTPServer:
    """Build (but do not start) the artifact server; raises on a busy port."""
    store = ArtifactStore(directory)
    if static_dir is None:
        candidate = Path.cwd() / "frontend" / "dist"
        static_dir = candidate if candidate.is_dir() else None
    else:
        static_dir = Path(static_dir)
    handler = type("BoundHandler", (_Handler,), {"store": store, "static_dir": static_dir})
    return ThreadingHTTPServer((host, port), handler)


def serve_artifacts(directory, host: str = "127.0.0.1", port: int = 8000, static_dir=None) -> None:
    server = make_server(directory, host=host, port=port, static_dir=static_dir)
    try:
        server.serve_forever()
    finally:
        server.server_close()
