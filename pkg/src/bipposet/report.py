"""Deterministic JSON/CSV verification reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA = 1


def _plain(obj: Any) -> Any:
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class Record:
    subject: str
    check: str
    status: str  # "pass", "fail" or "skip"
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"subject": self.subject, "check": self.check, "status": self.status, **self.detail}


def record(subject: str, check: str, ok: bool, **detail: Any) -> Record:
    return Record(subject, check, "pass" if ok else "fail", detail)


def skipped(subject: str, check: str, reason: str, **detail: Any) -> Record:
    return Record(subject, check, "skip", {"reason": reason, **detail})


@dataclass
class Report:
    command: str
    version: str
    config: dict[str, Any]
    records: list[Record] = field(default_factory=list)
    timings: dict[str, float] | None = None

    def summary(self) -> dict[str, int]:
        out = {"checks": len(self.records), "pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(r.status == "fail" for r in self.records)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA,
            "tool": "bipposet",
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "records": [r.to_json() for r in self.records],
            "summary": self.summary(),
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True, default=_plain) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["subject", "check", "status", "detail"])
        for r in self.records:
            writer.writerow([r.subject, r.check, r.status, json.dumps(r.detail, sort_keys=True, default=_plain)])
        return buf.getvalue()
