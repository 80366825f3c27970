"""Run manifests: every CLI command records what it ran, with which
configuration and seeds, what it read and wrote, and the SHA-256 of each
artifact, so a run can be reproduced and its outputs verified."""

from __future__ import annotations

import hashlib
import json
import time
from datetime import datetime, timezone
from pathlib import Path

MANIFEST_FILENAME = "run_manifest.json"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class RunRecorder:
    def __init__(self, command: str, args: dict):
        self.command = command
        self.args = {k: v for k, v in args.items() if not k.startswith("_")}
        self.inputs: list[str] = []
        self.artifacts: list[str] = []
        self._t0 = time.monotonic()
        self._started = datetime.now(timezone.utc).isoformat()

    def add_input(self, path) -> None:
        self.inputs.append(str(path))

    def add_artifact(self, path) -> None:
        self.artifacts.append(str(path))

    def write(self, out_dir) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        doc = {
            "command": self.command,
            "args": _jsonable(self.args),
            "inputs": sorted(set(self.inputs)),
            "artifacts": {
                str(Path(p).relative_to(out_dir)) if _inside(p, out_dir) else str(p): sha256_file(p)
                for p in sorted(set(self.artifacts))
            },
            "started_utc": self._started,
            "duration_s": round(time.monotonic() - self._t0, 3),
        }
        path = out_dir / MANIFEST_FILENAME
        path.write_text(json.dumps(doc, indent=1, sort_keys=True))
        return path


def _inside(path, directory) -> bool:
    try:
        Path(path).resolve().relative_to(Path(directory).resolve())
        return True
    except ValueError:
        return False


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value
