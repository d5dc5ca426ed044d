"""
Append-only JSONL record of certification runs.
"""
from __future__ import annotations

import json
import logging
import math
import os
import time
from typing import Any, Dict, List

log = logging.getLogger(__name__)

MAX_ENTRY_CHARS = 64_000


def _now_ms() -> int:
    return int(time.time() * 1000)


def _finite(value: Any) -> Any:
    # JSON has no infinities; exact zeros carry log_mag = -inf
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def append_entry(entry: Dict[str, Any], path: str) -> None:
    """Append one entry with a millisecond `ts`; oversized detail is dropped"""
    entry = _finite(dict(entry))
    entry.setdefault("ts", _now_ms())
    s = json.dumps(entry, ensure_ascii=False)
    if len(s) > MAX_ENTRY_CHARS:
        entry.pop("rows", None)
        entry["truncated"] = True
        s = json.dumps(entry, ensure_ascii=False)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "a", encoding="utf-8") as f:
        f.write(s + "\n")


def read_recent(limit: int, path: str) -> List[Dict[str, Any]]:
    """Newest `limit` entries, newest first; unreadable lines are skipped"""
    if limit <= 0 or not os.path.exists(path):
        return []
    lines: List[str] = []
    with open(path, "rb") as f:
        f.seek(0, os.SEEK_END)
        size = f.tell()
        chunk, buf = 8192, b""
        while size > 0 and len(lines) < limit:
            read = min(chunk, size)
            size -= read
            f.seek(size)
            buf = f.read(read) + buf
            parts = buf.split(b"\n")
            buf = parts[0]
            for line in reversed(parts[1:]):
                if line.strip():
                    lines.append(line.decode("utf-8", "ignore"))
        if buf.strip() and len(lines) < limit:
            lines.append(buf.decode("utf-8", "ignore"))
    out: List[Dict[str, Any]] = []
    for s in lines[:limit]:
        try:
            out.append(json.loads(s))
        except json.JSONDecodeError:
            log.warning("skipping unreadable ledger line in %s", path)
    return out
