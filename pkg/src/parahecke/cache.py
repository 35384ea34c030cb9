"""On-disk cache of right coset tables.

Each entry is a JSON file named by a stable hash of (N, label).  Entries are
re-validated on load; anything that fails validation is discarded and
recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .hecke import EnumerationBound, RightCosetTable, _enumerate, register_table
from .orthogonal import OrthoDoubleCosetLabel, as_level

log = logging.getLogger(__name__)

CACHE_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get("HECKE_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "parahecke"


def cache_key(N: int, label: OrthoDoubleCosetLabel) -> str:
    text = json.dumps({"N": N, "label": list(label.invariants), "v": CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:24]


class TableCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.discarded = 0

    def path_for(self, N: int, label: OrthoDoubleCosetLabel) -> Path:
        return self.directory / f"table-{cache_key(N, label)}.json"

    def load(self, N: int, label: OrthoDoubleCosetLabel) -> RightCosetTable | None:
        path = self.path_for(N, label)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
            table = RightCosetTable.from_json(data)
            if table.N != N or table.label != label:
                raise ValueError("entry belongs to a different level or label")
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            log.warning("discarding corrupt cache entry %s: %s", path, exc)
            self.discarded += 1
            path.unlink(missing_ok=True)
            return None
        return table

    def store(self, table: RightCosetTable) -> Path:
        path = self.path_for(table.N, table.label)
        self.directory.mkdir(parents=True, exist_ok=True)
        # write-then-rename keeps readers from seeing partial files
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(table.to_json(), fh, indent=1)
        os.replace(tmp, path)
        return path

    def get(
        self,
        N,
        label: OrthoDoubleCosetLabel,
        bound: EnumerationBound | None = None,
        jobs: int = 1,
    ) -> tuple[RightCosetTable, Path]:
        """Cached table for (N, label), computing and storing it if needed."""
        N = as_level(N).N
        if not label.is_reduced():
            raise ValueError(f"label {label} is not in lowest terms")
        (bound or EnumerationBound()).check(label.m)
        table = self.load(N, label)
        if table is None:
            table = _enumerate(N, label, jobs)
            path = self.store(table)
        else:
            path = self.path_for(N, label)
        register_table(table)
        return table, path
