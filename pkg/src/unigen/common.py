"""Shared low-level helpers: hashing, timestamps, atomic file writes."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

# Fixed instant used for artifact-embedded timestamps when a pipeline runs in
# replay mode, so replayed runs are byte-identical.
REPLAY_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def isoformat_utc(instant: datetime) -> str:
    # Fixed microsecond precision keeps the rendered form lexicographically
    # ordered, which run timestamps rely on.
    text = instant.astimezone(timezone.utc).isoformat(timespec="microseconds")
    return text.replace("+00:00", "Z")


def canonical_json(value: Any) -> str:
    """Serialize with sorted keys and fixed separators; content verbatim."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def atomic_write_text(path: Path, text: str) -> None:
    """Write via temp-then-rename so readers never observe a torn file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class LockTimeout(Exception):
    """Could not acquire an exclusive lock file within the wait budget."""


@contextmanager
def file_lock(path: Path, timeout: float = 30.0, poll: float = 0.05):
    """Exclusive advisory lock via O_EXCL lock-file creation.

    Works across processes sharing a filesystem; the lock file records the
    owner pid for post-mortem inspection.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    deadline = time.monotonic() + timeout
    while True:
        try:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            break
        except FileExistsError:
            if time.monotonic() >= deadline:
                raise LockTimeout(f"lock {path} held too long") from None
            time.sleep(poll)
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)
        yield
    finally:
        try:
            os.unlink(path)
        except FileNotFoundError:
            pass
