"""Append-only service-request ledger with notification dispatch.

Every state change appends one full JSON snapshot of the request to a
line-oriented file; loading replays the file and the last snapshot of
each id wins.  Appending never rewrites earlier lines, so a crash can
at worst truncate the final line, which loading reports loudly rather
than papering over.

A new request is persisted before its agency is notified.  If the
notification sink fails the request stays in 'received' with the
failure noted; if it succeeds the request advances to 'notified'.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Protocol


class Status(str, Enum):
    RECEIVED = "received"
    NOTIFIED = "notified"
    IN_PROGRESS = "in_progress"
    RESOLVED = "resolved"
    REJECTED = "rejected"


LEGAL_TRANSITIONS: dict[Status, frozenset[Status]] = {
    Status.RECEIVED: frozenset({Status.NOTIFIED}),
    Status.NOTIFIED: frozenset({Status.IN_PROGRESS, Status.REJECTED}),
    Status.IN_PROGRESS: frozenset({Status.RESOLVED, Status.REJECTED}),
    Status.RESOLVED: frozenset(),
    Status.REJECTED: frozenset(),
}

TERMINAL_STATUSES = frozenset(s for s, nxt in LEGAL_TRANSITIONS.items() if not nxt)


class LedgerError(Exception):
    pass


class UnknownRequest(LedgerError):
    def __init__(self, request_id: str):
        super().__init__(f"no request with id {request_id!r}")
        self.request_id = request_id


class IllegalTransition(LedgerError):
    def __init__(self, request_id: str, current: Status, target: Status):
        allowed = ", ".join(sorted(s.value for s in LEGAL_TRANSITIONS[current])) or "none"
        super().__init__(
            f"{request_id}: cannot move from {current.value} to {target.value} (allowed: {allowed})"
        )
        self.request_id = request_id
        self.current = current
        self.target = target


class StorageFailure(LedgerError):
    pass


class CorruptLedger(LedgerError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"ledger line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True, slots=True)
class Reporter:
    name: str
    contact: str


@dataclass(frozen=True, slots=True)
class HistoryEntry:
    at: str
    status: Status
    note: str = ""


@dataclass(frozen=True, slots=True)
class ServiceRequest:
    """One tracked request.  IRI-valued fields hold the full IRI text."""

    id: str
    created_at: str
    raw_text: str
    subject: str
    location: str
    type311: str | None
    agency: str
    action: str
    status: Status
    reporter: Reporter
    history: tuple[HistoryEntry, ...]

    def with_status(self, status: Status, at: str, note: str = "") -> "ServiceRequest":
        entry = HistoryEntry(at=at, status=status, note=note)
        return replace(self, status=status, history=self.history + (entry,))

    def with_note(self, at: str, note: str) -> "ServiceRequest":
        entry = HistoryEntry(at=at, status=self.status, note=note)
        return replace(self, history=self.history + (entry,))


class NotificationSink(Protocol):
    def deliver(self, request: ServiceRequest, message: str) -> None: ...


class RecordingSink:
    """Keeps delivered notifications in memory; one per request id."""

    def __init__(self):
        self.messages: dict[str, str] = {}

    def deliver(self, request: ServiceRequest, message: str) -> None:
        self.messages[request.id] = message


class FileSink:
    """Writes each notification to <outbox>/<request id>.txt."""

    def __init__(self, outbox):
        self.outbox = Path(outbox)

    def deliver(self, request: ServiceRequest, message: str) -> None:
        self.outbox.mkdir(parents=True, exist_ok=True)
        (self.outbox / f"{request.id}.txt").write_text(message, encoding="utf-8")


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def _parse_timestamp(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


def request_to_json(request: ServiceRequest) -> dict:
    return {
        "id": request.id,
        "created_at": request.created_at,
        "raw_text": request.raw_text,
        "subject": request.subject,
        "location": request.location,
        "type311": request.type311,
        "agency": request.agency,
        "action": request.action,
        "status": request.status.value,
        "reporter": {"name": request.reporter.name, "contact": request.reporter.contact},
        "history": [{"at": h.at, "status": h.status.value, "note": h.note} for h in request.history],
    }


_REQUIRED_KEYS = (
    "id", "created_at", "raw_text", "subject", "location",
    "type311", "agency", "action", "status", "reporter", "history",
)


def request_from_json(doc: dict) -> ServiceRequest:
    """Decode one snapshot, checking every structural invariant."""
    for key in _REQUIRED_KEYS:
        if key not in doc:
            raise ValueError(f"missing field {key!r}")
    try:
        status = Status(doc["status"])
    except ValueError:
        raise ValueError(f"unknown status {doc['status']!r}") from None
    if not isinstance(doc["id"], str) or not doc["id"]:
        raise ValueError("id must be a non-empty string")
    _parse_timestamp(doc["created_at"])
    reporter_doc = doc["reporter"]
    if not isinstance(reporter_doc, dict):
        raise ValueError("reporter must be an object")
    history_doc = doc["history"]
    if not isinstance(history_doc, list) or not history_doc:
        raise ValueError("history must be a non-empty list")
    history = []
    for entry in history_doc:
        try:
            entry_status = Status(entry["status"])
        except (KeyError, TypeError, ValueError):
            raise ValueError("history entry has a bad status") from None
        _parse_timestamp(entry["at"])
        history.append(HistoryEntry(at=entry["at"], status=entry_status, note=entry.get("note", "")))
    if history[-1].status != status:
        raise ValueError(f"status {status.value!r} disagrees with the last history entry")
    return ServiceRequest(
        id=doc["id"],
        created_at=doc["created_at"],
        raw_text=doc["raw_text"],
        subject=doc["subject"],
        location=doc["location"],
        type311=doc["type311"],
        agency=doc["agency"],
        action=doc["action"],
        status=status,
        reporter=Reporter(name=reporter_doc.get("name", ""), contact=reporter_doc.get("contact", "")),
        history=tuple(history),
    )


class Ledger:
    """Loads, appends and queries the request file.  Single writer."""

    def __init__(self, path, sink: NotificationSink):
        self.path = Path(path)
        self.sink = sink
        self._lock = threading.Lock()
        self._requests: dict[str, ServiceRequest] = {}
        self._id_prefix = uuid.uuid4().hex[:6]
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        text = self.path.read_text(encoding="utf-8")
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                raise CorruptLedger(number, "blank line")
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorruptLedger(number, f"not valid JSON ({e.msg})") from None
            try:
                request = request_from_json(doc)
            except ValueError as e:
                raise CorruptLedger(number, str(e)) from None
            self._requests[request.id] = request

    def _append(self, request: ServiceRequest) -> None:
        line = json.dumps(request_to_json(request), ensure_ascii=False)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as e:
            raise StorageFailure(f"cannot append to {self.path}: {e}") from e
        self._requests[request.id] = request

    def _new_id(self) -> str:
        return f"SR-{self._id_prefix}-{len(self._requests) + 1:06d}"

    def create_request(
        self,
        *,
        raw_text: str,
        subject: str,
        location: str,
        type311: str | None,
        agency: str,
        action: str,
        reporter: Reporter,
        notification: str,
    ) -> ServiceRequest:
        """Persist a new request, then try to notify its agency.

        The 'received' snapshot is durable before any delivery attempt;
        a sink failure leaves the request in 'received' with the error
        noted, a delivered notification advances it to 'notified'.
        """
        with self._lock:
            now = utc_now()
            request = ServiceRequest(
                id=self._new_id(),
                created_at=now,
                raw_text=raw_text,
                subject=subject,
                location=location,
                type311=type311,
                agency=agency,
                action=action,
                status=Status.RECEIVED,
                reporter=reporter,
                history=(HistoryEntry(at=now, status=Status.RECEIVED, note="request recorded"),),
            )
            self._append(request)
            try:
                self.sink.deliver(request, notification)
            except Exception as e:  # a sink may fail arbitrarily; the request must survive
                request = request.with_note(utc_now(), f"notification failed: {e}")
                self._append(request)
                return request
            request = request.with_status(Status.NOTIFIED, utc_now(), "agency notified")
            self._append(request)
            return request

    def set_status(self, request_id: str, target: Status, note: str = "") -> ServiceRequest:
        with self._lock:
            request = self._requests.get(request_id)
            if request is None:
                raise UnknownRequest(request_id)
            if target not in LEGAL_TRANSITIONS[request.status]:
                raise IllegalTransition(request_id, request.status, target)
            request = request.with_status(target, utc_now(), note)
            self._append(request)
            return request

    def get(self, request_id: str) -> ServiceRequest:
        request = self._requests.get(request_id)
        if request is None:
            raise UnknownRequest(request_id)
        return request

    def list_requests(
        self,
        *,
        status: Status | None = None,
        agency: str | None = None,
        location: str | None = None,
        subject: str | None = None,
    ) -> list[ServiceRequest]:
        out = []
        for request in self._requests.values():
            if status is not None and request.status != status:
                continue
            if agency is not None and request.agency != agency:
                continue
            if location is not None and request.location != location:
                continue
            if subject is not None and request.subject != subject:
                continue
            out.append(request)
        out.sort(key=lambda r: (r.created_at, r.id))
        return out

    def __len__(self) -> int:
        return len(self._requests)
