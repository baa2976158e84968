"""Content-addressed disk cache for computed echelon bases.

Entries are JSON files named by the sha256 of their key string; the
payload carries its own digest, so truncated, corrupted or stale entries
fail verification and are silently recomputed.  The cache is an
optimization only: results never depend on whether it is enabled.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

FORMAT_VERSION = "1"

_active = None


def set_active(cache) -> None:
    global _active
    _active = cache


def get_active():
    return _active


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _serialize_rows(rows) -> list:
    return [[[col, str(row[col])] for col in sorted(row)] for row in rows]


def _parse_rows(payload) -> list:
    rows = []
    for row_payload in payload:
        row = {}
        for col, val in row_payload:
            row[int(col)] = Fraction(val)
        rows.append(row)
    return rows


class MatrixCache:
    """Stores lists of sparse Fraction rows keyed by canonical strings."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / (sha256_text(key) + ".json")

    def load(self, key: str):
        path = self._path(key)
        if not path.is_file():
            return None
        try:
            data = json.loads(path.read_text())
            if data.get("format") != FORMAT_VERSION or data.get("key") != key:
                return None
            payload = data["rows"]
            body = json.dumps(payload, separators=(",", ":"))
            if data.get("digest") != sha256_text(body):
                return None
            return _parse_rows(payload)
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def store(self, key: str, rows) -> None:
        payload = _serialize_rows(rows)
        body = json.dumps(payload, separators=(",", ":"))
        data = {
            "format": FORMAT_VERSION,
            "key": key,
            "rows": payload,
            "digest": sha256_text(body),
        }
        try:
            self._path(key).write_text(json.dumps(data))
        except OSError:
            pass  # cache write failure must never fail the computation

    def get_or_compute(self, key: str, compute):
        rows = self.load(key)
        if rows is None:
            rows = compute()
            self.store(key, rows)
        return rows
