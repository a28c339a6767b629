"""Persistent a_p cache.

File format: text lines ``a <tab> p <tab> ap``, sorted by (a, p),
LF line endings, no header.  Writes go to a temporary file in the same
directory followed by an atomic rename; corrupt lines are skipped with
a warning and never trusted.
"""
from __future__ import annotations

import logging
import os
import tempfile
import threading
from pathlib import Path

log = logging.getLogger(__name__)


class ApCache:
    """Thread-safe map (curve constant, prime) -> a_p.

    Keys use the sixth-power-free curve constant, so mathematically
    identical curves share entries.
    """

    def __init__(self) -> None:
        self._data: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._data)

    def get(self, a: int, p: int) -> int | None:
        return self._data.get((a, p))

    def put(self, a: int, p: int, value: int) -> None:
        with self._lock:
            self._data[(a, p)] = value

    def put_many(self, a: int, items: dict[int, int]) -> None:
        with self._lock:
            for p, v in items.items():
                self._data[(a, p)] = v

    def merge(self, other: "ApCache") -> None:
        with self._lock:
            self._data.update(other._data)

    def load(self, path: str | os.PathLike) -> int:
        """Read entries from path; returns the number of lines accepted."""
        accepted = 0
        p = Path(path)
        if not p.exists():
            return 0
        with open(p, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                try:
                    if len(parts) != 3:
                        raise ValueError("expected 3 tab-separated fields")
                    a, q, v = int(parts[0]), int(parts[1]), int(parts[2])
                    # Hasse sanity: reject garbage rather than trusting it
                    if v * v > 4 * q:
                        raise ValueError("entry violates the Hasse bound")
                except ValueError as exc:
                    log.warning("skipping corrupt cache line %d of %s: %s", lineno, p, exc)
                    continue
                self._data[(a, q)] = v
                accepted += 1
        return accepted

    def save(self, path: str | os.PathLike) -> None:
        """Write all entries, sorted by (a, p), atomically."""
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            rows = sorted(self._data.items())
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=p.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
                for (a, q), v in rows:
                    fh.write(f"{a}\t{q}\t{v}\n")
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
