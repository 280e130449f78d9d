"""File-backed document service: users, sessions, documents, drafts.

Persistence is a plain directory so stored plans stay usable with external
version control:

    <data_dir>/index.json     users, ownership, revisions (atomic writes)
    <data_dir>/files/<id>.proc    canonical document text
    <data_dir>/drafts/<id>.txt    unvalidated work-in-progress text

Every write goes through write-to-temp + atomic rename, so an ungraceful
shutdown never leaves a torn file.  Canonical documents always re-parse
cleanly (they are stored via print_model(parse(text))); drafts are stored
verbatim and may be anything.

Mutations to one document are serialized under a per-document lock and
guarded by optimistic concurrency: a mutation succeeds only when the
caller's expected_revision matches the stored revision.  Undo/redo history
is kept in memory per (session, document) and is not persisted.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import tempfile
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import commands as engine
from .model import Diagnostic, has_errors, resolve
from .syntax import parse, print_model
from .validate import validate_text
from .views import (
    UnknownViewSubject,
    ViewModel,
    layer_involvement,
    milestone_list,
    milestone_io,
    scope_plan,
)

DEFAULT_SESSION_TTL = 8 * 3600.0
_PBKDF2_ITERATIONS = 60_000


class ServiceError(Exception):
    """Base for all service-level failures; carries a stable code."""

    code = "SERVICE_ERROR"
    http_status = 400

    def __init__(self, message: str, diagnostics: Optional[list[Diagnostic]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class AuthFailed(ServiceError):
    code = "AUTH_FAILED"
    http_status = 401


class AuthRequired(ServiceError):
    code = "AUTH_REQUIRED"
    http_status = 401


class Forbidden(ServiceError):
    code = "FORBIDDEN"
    http_status = 403


class NotFound(ServiceError):
    code = "NOT_FOUND"
    http_status = 404


class RevisionConflict(ServiceError):
    code = "REVISION_CONFLICT"
    http_status = 409


class ValidationFailed(ServiceError):
    code = "VALIDATION_FAILED"
    http_status = 422


@dataclass(frozen=True)
class Session:
    token: str
    username: str
    expiry: float


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


class DocumentStore:
    """All service operations behind the HTTP layer; usable directly."""

    def __init__(self, data_dir: str | Path, session_ttl: float = DEFAULT_SESSION_TTL):
        self.data_dir = Path(data_dir)
        self.files_dir = self.data_dir / "files"
        self.drafts_dir = self.data_dir / "drafts"
        for directory in (self.data_dir, self.files_dir, self.drafts_dir):
            directory.mkdir(parents=True, exist_ok=True)
        self.session_ttl = session_ttl
        self._index_path = self.data_dir / "index.json"
        self._lock = threading.RLock()
        self._doc_locks: dict[str, threading.Lock] = {}
        self._sessions: dict[str, Session] = {}
        # undo/redo history per (session token, document id); in-memory only
        self._histories: dict[tuple[str, str], engine.History] = {}
        self._index = self._load_index()

    # -- index persistence ----------------------------------------------------

    def _load_index(self) -> dict:
        if self._index_path.exists():
            with open(self._index_path, encoding="utf-8") as handle:
                return json.load(handle)
        index = {"version": 1, "users": {}, "documents": {}}
        _atomic_write(self._index_path, json.dumps(index, indent=2) + "\n")
        return index

    def _save_index(self) -> None:
        _atomic_write(self._index_path, json.dumps(self._index, indent=2) + "\n")

    def _doc_lock(self, doc_id: str) -> threading.Lock:
        with self._lock:
            return self._doc_locks.setdefault(doc_id, threading.Lock())

    # -- users and sessions ----------------------------------------------------

    def create_user(self, username: str, password: str) -> None:
        if not username:
            raise ValueError("username must be non-empty")
        with self._lock:
            if username in self._index["users"]:
                raise ValueError(f"user {username!r} already exists")
            salt = secrets.token_hex(16)
            self._index["users"][username] = {
                "salt": salt,
                "hash": self._hash_password(password, salt),
                "iterations": _PBKDF2_ITERATIONS,
            }
            self._save_index()

    def has_user(self, username: str) -> bool:
        with self._lock:
            return username in self._index["users"]

    @staticmethod
    def _hash_password(password: str, salt: str, iterations: int = _PBKDF2_ITERATIONS) -> str:
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt), iterations,
        )
        return digest.hex()

    def login(self, username: str, password: str) -> Session:
        """Issue a bearer session; unknown user and wrong password are
        indistinguishable by contract."""
        with self._lock:
            record = self._index["users"].get(username)
        if record is None:
            # burn comparable time so unknown users are not enumerable
            self._hash_password(password, "00" * 16)
            raise AuthFailed("invalid credentials")
        computed = self._hash_password(password, record["salt"], record["iterations"])
        if not secrets.compare_digest(computed, record["hash"]):
            raise AuthFailed("invalid credentials")
        session = Session(
            token=secrets.token_urlsafe(32),
            username=username,
            expiry=time.time() + self.session_ttl,
        )
        with self._lock:
            self._sessions[session.token] = session
        return session

    def _require_session(self, token: Optional[str]) -> Session:
        if not token:
            raise AuthRequired("missing bearer token")
        with self._lock:
            session = self._sessions.get(token)
            if session is None or session.expiry < time.time():
                self._sessions.pop(token, None)
                raise AuthRequired("invalid or expired session")
        return session

    def logout(self, token: str) -> None:
        with self._lock:
            self._sessions.pop(token, None)

    # -- document records -------------------------------------------------------

    def _require_document(self, session: Session, doc_id: str) -> dict:
        with self._lock:
            record = self._index["documents"].get(doc_id)
        if record is None:
            raise NotFound(f"no document {doc_id!r}")
        if record["owner"] != session.username:
            raise Forbidden("document belongs to another user")
        return record

    def _doc_path(self, doc_id: str) -> Path:
        return self.files_dir / f"{doc_id}.proc"

    def _draft_path(self, doc_id: str) -> Path:
        return self.drafts_dir / f"{doc_id}.txt"

    def _read_text(self, doc_id: str) -> str:
        with open(self._doc_path(doc_id), encoding="utf-8", newline="") as handle:
            return handle.read()

    @staticmethod
    def _canonicalize_valid(text: str) -> tuple[str, str]:
        """Validate fully, return (canonical text, header name)."""
        diagnostics = validate_text(text)
        if has_errors(diagnostics):
            raise ValidationFailed("document has validation errors", diagnostics)
        model = parse(text).model
        assert model is not None
        return print_model(model), model.header.name

    def create_document(self, token: str, text: str) -> dict:
        session = self._require_session(token)
        canonical, name = self._canonicalize_valid(text)
        doc_id = secrets.token_hex(8)
        with self._lock:
            _atomic_write(self._doc_path(doc_id), canonical)
            self._index["documents"][doc_id] = {
                "owner": session.username,
                "revision": 1,
                "name": name,
                "updated_at": _utc_now(),
            }
            self._save_index()
        return {"id": doc_id, "revision": 1, "name": name}

    def list_files(self, token: str) -> list[dict]:
        """Summaries of the caller's documents only; never the text."""
        session = self._require_session(token)
        with self._lock:
            return [
                {
                    "id": doc_id,
                    "name": record["name"],
                    "revision": record["revision"],
                    "updated_at": record["updated_at"],
                }
                for doc_id, record in sorted(self._index["documents"].items())
                if record["owner"] == session.username
            ]

    def get_document(self, token: str, doc_id: str) -> dict:
        session = self._require_session(token)
        record = self._require_document(session, doc_id)
        return {
            "id": doc_id,
            "text": self._read_text(doc_id),
            "revision": record["revision"],
            "name": record["name"],
            "updated_at": record["updated_at"],
        }

    def _commit(self, doc_id: str, record: dict, canonical: str, name: str) -> int:
        _atomic_write(self._doc_path(doc_id), canonical)
        with self._lock:
            record["revision"] += 1
            record["name"] = name
            record["updated_at"] = _utc_now()
            self._save_index()
        return record["revision"]

    def put_document(self, token: str, doc_id: str, text: str, expected_revision: int) -> int:
        """Replace the whole document under optimistic concurrency."""
        session = self._require_session(token)
        with self._doc_lock(doc_id):
            record = self._require_document(session, doc_id)
            if record["revision"] != expected_revision:
                raise RevisionConflict(
                    f"expected revision {expected_revision}, stored is {record['revision']}"
                )
            canonical, name = self._canonicalize_valid(text)
            return self._commit(doc_id, record, canonical, name)

    # -- commands, undo, redo ----------------------------------------------------

    def _load_model(self, doc_id: str):
        result = parse(self._read_text(doc_id))
        assert result.model is not None, "stored canonical text must parse"
        return result.model

    def _history(self, token: str, doc_id: str) -> engine.History:
        with self._lock:
            return self._histories.setdefault((token, doc_id), engine.History())

    def apply_commands(
        self, token: str, doc_id: str, expected_revision: int, commands: list,
    ) -> tuple[int, str]:
        """Apply a command batch atomically; returns (revision, text).

        Accepts wire-format dicts or Command objects.
        """
        session = self._require_session(token)
        parsed = [
            engine.command_from_json(c) if isinstance(c, dict) else c for c in commands
        ]
        with self._doc_lock(doc_id):
            record = self._require_document(session, doc_id)
            if record["revision"] != expected_revision:
                raise RevisionConflict(
                    f"expected revision {expected_revision}, stored is {record['revision']}"
                )
            model = self._load_model(doc_id)
            if not parsed:
                return record["revision"], print_model(model)
            engine.apply_batch(model, self._history(token, doc_id), parsed)
            canonical = print_model(model)
            revision = self._commit(doc_id, record, canonical, model.header.name)
            return revision, canonical

    def undo(self, token: str, doc_id: str, expected_revision: Optional[int] = None) -> tuple[int, str]:
        return self._replay(token, doc_id, expected_revision, engine.undo)

    def redo(self, token: str, doc_id: str, expected_revision: Optional[int] = None) -> tuple[int, str]:
        return self._replay(token, doc_id, expected_revision, engine.redo)

    def _replay(self, token, doc_id, expected_revision, operation) -> tuple[int, str]:
        session = self._require_session(token)
        with self._doc_lock(doc_id):
            record = self._require_document(session, doc_id)
            if expected_revision is not None and record["revision"] != expected_revision:
                raise RevisionConflict(
                    f"expected revision {expected_revision}, stored is {record['revision']}"
                )
            model = self._load_model(doc_id)
            operation(model, self._history(token, doc_id))
            canonical = print_model(model)
            revision = self._commit(doc_id, record, canonical, model.header.name)
            return revision, canonical

    # -- drafts ---------------------------------------------------------------

    def save_draft(self, token: str, doc_id: str, text: str) -> None:
        """Store work-in-progress text verbatim; no validation by contract."""
        session = self._require_session(token)
        with self._doc_lock(doc_id):
            self._require_document(session, doc_id)
            _atomic_write(self._draft_path(doc_id), text)

    def get_draft(self, token: str, doc_id: str) -> Optional[str]:
        session = self._require_session(token)
        self._require_document(session, doc_id)
        path = self._draft_path(doc_id)
        if not path.exists():
            return None
        with open(path, encoding="utf-8", newline="") as handle:
            return handle.read()

    def delete_draft(self, token: str, doc_id: str) -> None:
        session = self._require_session(token)
        with self._doc_lock(doc_id):
            self._require_document(session, doc_id)
            try:
                os.unlink(self._draft_path(doc_id))
            except FileNotFoundError:
                pass

    # -- validation and views ------------------------------------------------------

    def validate_document(self, token: str, doc_id: str, text: Optional[str] = None) -> list[Diagnostic]:
        """Diagnostics for the given text, or for the stored document."""
        session = self._require_session(token)
        self._require_document(session, doc_id)
        if text is None:
            text = self._read_text(doc_id)
        return validate_text(text)

    def get_view(self, token: str, doc_id: str, kind: str, params: dict) -> ViewModel:
        session = self._require_session(token)
        self._require_document(session, doc_id)
        model = self._load_model(doc_id)
        resolved, diagnostics = resolve(model)
        if resolved is None:
            raise ValidationFailed("document does not resolve", diagnostics)

        def param(name: str) -> str:
            value = params.get(name)
            if not value:
                raise UnknownViewSubject(f"view {kind!r} requires a {name!r} parameter")
            return value

        if kind == "milestone-list":
            return milestone_list(resolved)
        if kind == "scope-plan":
            return scope_plan(resolved, param("layer"), param("scope"))
        if kind == "milestone-io":
            return milestone_io(resolved, param("milestone"))
        if kind == "layer-involvement":
            return layer_involvement(resolved, param("layer"))
        raise NotFound(f"unknown view kind {kind!r}")
