"""JSONL mission logs: append-only, line-streamable, lossless round-trip."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CorruptLine

LOG_SCHEMA_VERSION = 1

RECORD_KINDS = ("state", "scan", "task", "motion_plan", "predicate_state",
                "replan_event", "chat", "report")


@dataclass(frozen=True)
class LogRecord:
    """One mission log line.

    timestamp is simulated seconds (step_index * dt), so logs are
    byte-reproducible for identical seeds and command sequences.
    """

    step_index: int
    kind: str
    payload: dict
    timestamp: float

    def __post_init__(self):
        if self.kind not in RECORD_KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")

    def to_json(self) -> str:
        return json.dumps({"schema_version": LOG_SCHEMA_VERSION,
                           "step_index": self.step_index,
                           "kind": self.kind,
                           "timestamp": self.timestamp,
                           "payload": self.payload},
                          separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "LogRecord":
        data = json.loads(line)
        return cls(step_index=data["step_index"], kind=data["kind"],
                   payload=data["payload"], timestamp=data["timestamp"])


def write_log(path, records: Iterable[LogRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json())
            fh.write("\n")


class LogWriter:
    """Incremental writer used by live missions."""

    def __init__(self, path):
        self._fh = open(path, "w", encoding="utf-8")

    def write(self, record: LogRecord) -> None:
        self._fh.write(record.to_json())
        self._fh.write("\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_log(path, strict: bool = True,
             on_skip=None) -> Iterator[LogRecord]:
    """Yield records; malformed lines abort (strict) or are skipped and
    reported through on_skip(line_number, reason)."""
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield LogRecord.from_json(line)
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                if strict:
                    raise CorruptLine(number, str(exc)) from exc
                if on_skip is not None:
                    on_skip(number, str(exc))
