"""Durable session persistence with canonical JSON documents.

One file per session under the data directory plus an ``index.json``
summary. Serialization is canonical (sorted keys, two-space indent, no
ASCII escaping, trailing newline) so that load followed by save is
byte-identical, and every write is atomic: serialize to a temp file,
fsync, then rename over the target.
"""
from __future__ import annotations

import json
import os
import threading
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterator

from .errors import (
    CorruptSession,
    LeaseHeld,
    SequenceConflict,
    SessionNotFound,
)
from .workflow import Phase, WorkflowState


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"
    TOOL = "tool"


class Modality(str, Enum):
    TEXT = "text"
    AUDIO_TRANSCRIBED = "audio_transcribed"


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def format_timestamp(moment: datetime) -> str:
    """RFC 3339 UTC with exactly millisecond precision, e.g. 2025-03-01T09:30:00.000Z."""
    moment = moment.astimezone(timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%S.") + f"{moment.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class ClientProfile:
    company_name: str
    client_name: str
    industry_type: str
    industry_size: str
    job_title: str

    def to_dict(self) -> dict:
        return {
            "company_name": self.company_name,
            "client_name": self.client_name,
            "industry_type": self.industry_type,
            "industry_size": self.industry_size,
            "job_title": self.job_title,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ClientProfile":
        return cls(**{k: doc[k] for k in (
            "company_name", "client_name", "industry_type", "industry_size", "job_title",
        )})


@dataclass(frozen=True)
class Message:
    id: int
    role: Role
    content: str
    modality: Modality
    timestamp: str
    detected_language: str | None = None
    tool_call_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "role": self.role.value,
            "content": self.content,
            "modality": self.modality.value,
            "detected_language": self.detected_language,
            "timestamp": self.timestamp,
            "tool_call_id": self.tool_call_id,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Message":
        return cls(
            id=doc["id"],
            role=Role(doc["role"]),
            content=doc["content"],
            modality=Modality(doc["modality"]),
            detected_language=doc["detected_language"],
            timestamp=doc["timestamp"],
            tool_call_id=doc["tool_call_id"],
        )


@dataclass(frozen=True)
class Session:
    session_id: str
    profile: ClientProfile
    catalog_version: str
    status: str
    created_at: str
    updated_at: str
    state: WorkflowState
    messages: tuple[Message, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "profile": self.profile.to_dict(),
            "catalog_version": self.catalog_version,
            "status": self.status,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "state": self.state.to_dict(),
            "messages": [m.to_dict() for m in self.messages],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Session":
        return cls(
            session_id=doc["session_id"],
            profile=ClientProfile.from_dict(doc["profile"]),
            catalog_version=doc["catalog_version"],
            status=doc["status"],
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
            state=WorkflowState.from_dict(doc["state"]),
            messages=tuple(Message.from_dict(m) for m in doc["messages"]),
        )

    def next_message_id(self) -> int:
        return self.messages[-1].id + 1 if self.messages else 1


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


# -- document validation ------------------------------------------------

_PROFILE_KEYS = ("company_name", "client_name", "industry_type", "industry_size", "job_title")
_MESSAGE_KEYS = ("id", "role", "content", "modality", "detected_language", "timestamp", "tool_call_id")
_STATE_KEYS = ("phase", "priority_order", "active_category", "cursor", "sentinel_issued")
_ROLES = {r.value for r in Role}
_MODALITIES = {m.value for m in Modality}
_PHASES = {p.value for p in Phase}
_STATUSES = {"active", "completed"}


def _fail(path: Path, where: str, why: str) -> None:
    raise CorruptSession(f"{where}: {why}", path=str(path))


def _check_str(value, path: Path, where: str, optional: bool = False) -> None:
    if optional and value is None:
        return
    if not isinstance(value, str):
        _fail(path, where, f"expected string, got {type(value).__name__}")


def validate_session_doc(doc, path: Path) -> None:
    """Structural validation with the offending JSON path in every error."""
    if not isinstance(doc, dict):
        _fail(path, "$", "document is not an object")
    for key in ("session_id", "profile", "catalog_version", "status",
                "created_at", "updated_at", "state", "messages"):
        if key not in doc:
            _fail(path, "$", f"missing key {key!r}")
    for key in ("session_id", "catalog_version", "created_at", "updated_at"):
        _check_str(doc[key], path, f"$.{key}")
    if doc["status"] not in _STATUSES:
        _fail(path, "$.status", f"unknown status {doc['status']!r}")

    profile = doc["profile"]
    if not isinstance(profile, dict):
        _fail(path, "$.profile", "not an object")
    for key in _PROFILE_KEYS:
        if key not in profile:
            _fail(path, "$.profile", f"missing key {key!r}")
        _check_str(profile[key], path, f"$.profile.{key}")

    state = doc["state"]
    if not isinstance(state, dict):
        _fail(path, "$.state", "not an object")
    for key in _STATE_KEYS:
        if key not in state:
            _fail(path, "$.state", f"missing key {key!r}")
    if state["phase"] not in _PHASES:
        _fail(path, "$.state.phase", f"unknown phase {state['phase']!r}")
    if not isinstance(state["priority_order"], list):
        _fail(path, "$.state.priority_order", "not an array")
    _check_str(state["active_category"], path, "$.state.active_category", optional=True)
    if not isinstance(state["cursor"], dict):
        _fail(path, "$.state.cursor", "not an object")
    for cid, pos in state["cursor"].items():
        if not isinstance(pos, int) or pos < 0:
            _fail(path, f"$.state.cursor.{cid}", "expected non-negative integer")
    if not isinstance(state["sentinel_issued"], list):
        _fail(path, "$.state.sentinel_issued", "not an array")

    messages = doc["messages"]
    if not isinstance(messages, list):
        _fail(path, "$.messages", "not an array")
    for i, msg in enumerate(messages):
        where = f"$.messages[{i}]"
        if not isinstance(msg, dict):
            _fail(path, where, "not an object")
        for key in _MESSAGE_KEYS:
            if key not in msg:
                _fail(path, where, f"missing key {key!r}")
        if not isinstance(msg["id"], int):
            _fail(path, f"{where}.id", "expected integer")
        if msg["id"] != i + 1:
            _fail(path, f"{where}.id", f"expected {i + 1}, got {msg['id']}")
        if msg["role"] not in _ROLES:
            _fail(path, f"{where}.role", f"unknown role {msg['role']!r}")
        if msg["modality"] not in _MODALITIES:
            _fail(path, f"{where}.modality", f"unknown modality {msg['modality']!r}")
        _check_str(msg["content"], path, f"{where}.content")
        _check_str(msg["timestamp"], path, f"{where}.timestamp")
        _check_str(msg["detected_language"], path, f"{where}.detected_language", optional=True)
        _check_str(msg["tool_call_id"], path, f"{where}.tool_call_id", optional=True)


# -- the store -----------------------------------------------------------

class SessionStore:
    """Filesystem-backed session repository.

    Session files are the source of truth; ``index.json`` is a summary kept
    for quick external inspection and rebuilt from the files whenever it is
    missing. A per-session in-process lease serializes writers within one
    service process.
    """

    def __init__(self, root: str | Path, clock: Callable[[], datetime] = utc_now):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self._lock = threading.Lock()
        self._leases: set[str] = set()

    # -- paths and low-level io

    def session_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _index_path(self) -> Path:
        return self.root / "index.json"

    def _session_ids(self) -> list[str]:
        return sorted(
            p.stem for p in self.root.glob("*.json")
            if p.name != "index.json" and not p.name.endswith(".tmp")
        )

    def _write_session(self, session: Session) -> None:
        _atomic_write(self.session_path(session.session_id), canonical_json(session.to_dict()))
        self._write_index()

    def _write_index(self) -> None:
        entries = []
        for sid in self._session_ids():
            doc = self._read_doc(sid)
            entries.append({
                "session_id": sid,
                "company_name": doc["profile"]["company_name"],
                "client_name": doc["profile"]["client_name"],
                "job_title": doc["profile"]["job_title"],
                "status": doc["status"],
                "created_at": doc["created_at"],
                "updated_at": doc["updated_at"],
            })
        entries.sort(key=lambda e: (e["updated_at"], e["session_id"]), reverse=True)
        _atomic_write(self._index_path(), canonical_json({"sessions": entries}))

    def _read_doc(self, session_id: str) -> dict:
        path = self.session_path(session_id)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise SessionNotFound(session_id) from None
        try:
            doc = json.loads(raw)
        except ValueError as exc:
            raise CorruptSession(f"invalid JSON: {exc}", path=str(path)) from exc
        validate_session_doc(doc, path)
        if doc["session_id"] != session_id:
            raise CorruptSession(
                f"$.session_id: {doc['session_id']!r} does not match filename",
                path=str(path),
            )
        return doc

    # -- leases

    @contextmanager
    def lease(self, session_id: str) -> Iterator[None]:
        """Exclusive in-process hold on a session; raises LeaseHeld if taken."""
        with self._lock:
            if session_id in self._leases:
                raise LeaseHeld(session_id)
            self._leases.add(session_id)
        try:
            yield
        finally:
            with self._lock:
                self._leases.discard(session_id)

    # -- public api

    def create_session(
        self,
        profile: ClientProfile,
        catalog_version: str,
        session_id: str | None = None,
    ) -> Session:
        sid = session_id or uuid.uuid4().hex
        if self.session_path(sid).exists():
            raise SequenceConflict(f"session {sid!r} already exists")
        now = format_timestamp(self.clock())
        session = Session(
            session_id=sid,
            profile=profile,
            catalog_version=catalog_version,
            status="active",
            created_at=now,
            updated_at=now,
            state=WorkflowState(),
            messages=(),
        )
        self._write_session(session)
        return session

    def load(self, session_id: str) -> Session:
        return Session.from_dict(self._read_doc(session_id))

    def save(self, session: Session) -> None:
        self._write_session(session)

    def append_messages(
        self,
        session_id: str,
        new_messages: list[Message],
        *,
        state: WorkflowState,
    ) -> Session:
        """Commit one turn: extend the transcript and replace the state.

        Message ids must continue the stored sequence without gaps; the
        status field tracks the workflow phase. This is the single mutation
        point for turns, so an aborted turn that never reaches it leaves the
        file byte-identical.
        """
        session = self.load(session_id)
        expected = session.next_message_id()
        for msg in new_messages:
            if msg.id != expected:
                raise SequenceConflict(
                    f"message id {msg.id} does not continue sequence (expected {expected})"
                )
            expected += 1
        status = "completed" if state.phase is Phase.COMPLETED else "active"
        updated = replace(
            session,
            messages=session.messages + tuple(new_messages),
            state=state,
            status=status,
            updated_at=format_timestamp(self.clock()),
        )
        self._write_session(updated)
        return updated

    def list_sessions(
        self,
        *,
        company: str | None = None,
        client: str | None = None,
        job_title: str | None = None,
        status: str | None = None,
    ) -> list[Session]:
        """All sessions newest-first, with exact-match filters."""
        sessions = [self.load(sid) for sid in self._session_ids()]
        if company is not None:
            sessions = [s for s in sessions if s.profile.company_name == company]
        if client is not None:
            sessions = [s for s in sessions if s.profile.client_name == client]
        if job_title is not None:
            sessions = [s for s in sessions if s.profile.job_title == job_title]
        if status is not None:
            sessions = [s for s in sessions if s.status == status]
        sessions.sort(key=lambda s: (s.updated_at, s.session_id), reverse=True)
        return sessions

    def rebuild_index(self) -> None:
        self._write_index()

    # -- reports (kept out of the session glob in their own subdirectory)

    def report_path(self, session_id: str) -> Path:
        return self.root / "reports" / f"{session_id}.json"

    def save_report(self, session_id: str, doc: dict) -> None:
        if not self.session_path(session_id).exists():
            raise SessionNotFound(session_id)
        path = self.report_path(session_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, canonical_json(doc))

    def load_report(self, session_id: str) -> dict | None:
        try:
            raw = self.report_path(session_id).read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        try:
            return json.loads(raw)
        except ValueError as exc:
            raise CorruptSession(
                f"invalid JSON in report: {exc}", path=str(self.report_path(session_id))
            ) from exc
