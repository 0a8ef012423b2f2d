"""Durable JSON workspace behind the session service.

One file holds everything: named frames, lotteries, assessments, and the
state of every elicitation session.  Writes go through a temp file and an
atomic rename, so a crash mid-save leaves the previous contents intact.
"""

from __future__ import annotations

import copy
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .errors import ValidationError

SECTIONS = ("frames", "lotteries", "assessments", "sessions")


class WorkspaceStore:
    """Keyed JSON documents, persisted after every change.

    Pass ``path=None`` for a throwaway in-memory workspace (handy in
    tests).  Values are plain JSON-compatible dicts; the store never
    interprets them.
    """

    def __init__(self, path: Optional[str | os.PathLike] = None):
        self.path = None if path is None else Path(path)
        self._data: dict = {section: {} for section in SECTIONS}
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            raw = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read workspace {self.path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValidationError(f"workspace {self.path} is not a JSON object")
        for section in SECTIONS:
            part = raw.get(section, {})
            if not isinstance(part, dict):
                raise ValidationError(f"workspace section {section!r} is corrupt")
            self._data[section] = part

    def save(self) -> None:
        if self.path is None:
            return
        payload = json.dumps({"version": 1, **self._data}, indent=1, sort_keys=True)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(
            dir=self.path.parent, prefix=self.path.name, suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(payload)
            os.replace(tmp, self.path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    # ------------------------------------------------------------- access

    def _section(self, section: str) -> dict:
        if section not in SECTIONS:
            raise KeyError(section)
        return self._data[section]

    def get(self, section: str, key: str) -> Optional[dict]:
        value = self._section(section).get(key)
        return None if value is None else copy.deepcopy(value)

    def put(self, section: str, key: str, value: dict) -> None:
        self._section(section)[key] = copy.deepcopy(value)
        self.save()

    def delete(self, section: str, key: str) -> bool:
        existed = self._section(section).pop(key, None) is not None
        if existed:
            self.save()
        return existed

    def keys(self, section: str) -> list[str]:
        return sorted(self._section(section))
