# report_store.py
"""
Report history for sharelab.

- Stores every saved report in a single JSON file (a list of entries).
- `main.py --out PATH` and the HTTP API append to it.
- A missing or unreadable file reads as an empty history.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from utils import get_report_path

logger = logging.getLogger(__name__)


@dataclass
class ReportEntry:
    timestamp: str
    event_type: str
    meta: Dict[str, Any] = field(default_factory=dict)
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "timestamp": self.timestamp,
            "event_type": self.event_type,
            "meta": self.meta,
            "payload": self.payload,
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "ReportEntry":
        return ReportEntry(
            timestamp=data.get("timestamp", ""),
            event_type=data.get("event_type", ""),
            meta=data.get("meta", {}) or {},
            payload=data.get("payload", {}) or {},
        )


class ReportStore:
    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else get_report_path()

    def load(self) -> List[ReportEntry]:
        """Entries in insertion order; [] if the file is missing or not a JSON list."""
        if not self.path.exists():
            return []
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            logger.warning("report history %s is not valid JSON; starting fresh", self.path)
            return []

        if not isinstance(raw, list):
            return []

        return [ReportEntry.from_dict(item) for item in raw if isinstance(item, dict)]

    def save(self, entries: List[ReportEntry]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        raw = [e.to_dict() for e in entries]
        self.path.write_text(json.dumps(raw, ensure_ascii=False, indent=2), encoding="utf-8")

    def append(self, entry: ReportEntry) -> None:
        entries = self.load()
        entries.append(entry)
        self.save(entries)
        logger.info("appended %s report to %s (%d entries)", entry.event_type, self.path, len(entries))

    def by_type(self, event_type: str) -> List[ReportEntry]:
        return [e for e in self.load() if e.event_type == event_type]

    @staticmethod
    def create_entry(event_type: str, meta: Dict[str, Any], payload: Dict[str, Any]) -> ReportEntry:
        return ReportEntry(
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z"),
            event_type=event_type,
            meta=meta,
            payload=payload,
        )
