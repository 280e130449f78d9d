"""Document store: auth, isolation, revisions, drafts, persistence."""

from __future__ import annotations

import threading

import pytest

from procplan.store import (
    AuthFailed,
    AuthRequired,
    DocumentStore,
    Forbidden,
    NotFound,
    RevisionConflict,
    ValidationFailed,
)
from procplan.commands import CommandError
from procplan.syntax import canonicalize
from procplan import views

from helpers import fixture_text

MINIMAL = fixture_text("minimal.proc")
REFERENCE = fixture_text("reference.proc")


@pytest.fixture()
def store(tmp_path):
    s = DocumentStore(tmp_path / "data")
    s.create_user("alice", "wonder")
    s.create_user("bob", "builder")
    return s


@pytest.fixture()
def alice(store):
    return store.login("alice", "wonder").token


@pytest.fixture()
def bob(store):
    return store.login("bob", "builder").token


def test_login_success(store):
    session = store.login("alice", "wonder")
    assert session.username == "alice"
    assert len(session.token) >= 32  # >= 128 bits of randomness, urlsafe-encoded
    assert session.expiry > 0


def test_login_failures_are_uniform(store):
    with pytest.raises(AuthFailed) as wrong_pw:
        store.login("alice", "nope")
    with pytest.raises(AuthFailed) as unknown:
        store.login("nobody", "nope")
    assert str(wrong_pw.value) == str(unknown.value)
    assert wrong_pw.value.code == unknown.value.code == "AUTH_FAILED"


def test_expired_session_rejected(tmp_path):
    store = DocumentStore(tmp_path / "d", session_ttl=-1)
    store.create_user("u", "p")
    token = store.login("u", "p").token
    with pytest.raises(AuthRequired):
        store.list_files(token)


def test_missing_token_rejected(store):
    with pytest.raises(AuthRequired):
        store.list_files(None)
    with pytest.raises(AuthRequired):
        store.list_files("bogus-token")


def test_list_files_empty_then_scoped(store, alice, bob):
    assert store.list_files(alice) == []
    store.create_document(alice, MINIMAL)
    store.create_document(alice, REFERENCE)
    summaries = store.list_files(alice)
    assert len(summaries) == 2
    assert {s["name"] for s in summaries} == {"P", "Release Plan"}
    for summary in summaries:
        assert set(summary) == {"id", "name", "revision", "updated_at"}  # never text
    assert store.list_files(bob) == []


def test_document_isolation(store, alice, bob):
    doc = store.create_document(alice, MINIMAL)
    with pytest.raises(Forbidden):
        store.get_document(bob, doc["id"])
    with pytest.raises(Forbidden):
        store.put_document(bob, doc["id"], MINIMAL, 1)
    with pytest.raises(Forbidden):
        store.save_draft(bob, doc["id"], "x")
    with pytest.raises(Forbidden):
        store.get_draft(bob, doc["id"])
    with pytest.raises(Forbidden):
        store.apply_commands(bob, doc["id"], 1, [])
    with pytest.raises(Forbidden):
        store.get_view(bob, doc["id"], "milestone-list", {})
    with pytest.raises(NotFound):
        store.get_document(alice, "no-such-id")


def test_stored_text_is_canonical(store, alice):
    doc = store.create_document(alice, MINIMAL)
    text = store.get_document(alice, doc["id"])["text"]
    assert text == canonicalize(MINIMAL)
    assert canonicalize(text) == text


def test_put_validates_and_bumps_revision(store, alice):
    doc = store.create_document(alice, MINIMAL)
    assert doc["revision"] == 1
    new_revision = store.put_document(alice, doc["id"], REFERENCE, 1)
    assert new_revision == 2
    fetched = store.get_document(alice, doc["id"])
    assert fetched["revision"] == 2
    assert fetched["name"] == "Release Plan"


def test_put_stale_revision_conflicts(store, alice):
    doc = store.create_document(alice, MINIMAL)
    store.put_document(alice, doc["id"], REFERENCE, 1)
    with pytest.raises(RevisionConflict):
        store.put_document(alice, doc["id"], MINIMAL, 1)
    assert store.get_document(alice, doc["id"])["revision"] == 2


def test_put_invalid_text_reports_diagnostics(store, alice):
    doc = store.create_document(alice, MINIMAL)
    bad = (
        'process name "P" version "1" timeline weeks 5\n'
        'layer l description ""\n'
        'scope s layer l description ""\n'
        'responsibility resp asmilestone "ghost"\nend'
    )
    with pytest.raises(ValidationFailed) as exc:
        store.put_document(alice, doc["id"], bad, 1)
    assert [d.code for d in exc.value.diagnostics] == ["DANGLING_REF"]
    assert store.get_document(alice, doc["id"])["revision"] == 1


def test_apply_commands_and_undo_round_trip(store, alice):
    doc = store.create_document(alice, REFERENCE)
    original = store.get_document(alice, doc["id"])["text"]
    revision, text = store.apply_commands(alice, doc["id"], 1, [
        {"cmd": "AddMilestone", "name": "launch_party", "position": 16},
    ])
    assert revision == 2
    assert "launch_party" in text
    assert store.get_document(alice, doc["id"])["text"] == text

    revision, text = store.undo(alice, doc["id"])
    assert revision == 3
    assert text == original
    revision, text = store.redo(alice, doc["id"])
    assert revision == 4
    assert "launch_party" in text


def test_apply_commands_stale_revision(store, alice):
    doc = store.create_document(alice, REFERENCE)
    with pytest.raises(RevisionConflict):
        store.apply_commands(alice, doc["id"], 99, [
            {"cmd": "MoveMilestone", "name": "release", "position": 1},
        ])


def test_apply_commands_invalid_batch_keeps_revision(store, alice):
    doc = store.create_document(alice, REFERENCE)
    before = store.get_document(alice, doc["id"])
    with pytest.raises(CommandError):
        store.apply_commands(alice, doc["id"], 1, [
            {"cmd": "MoveMilestone", "name": "release", "position": 2},
            {"cmd": "AddMilestone", "name": "release", "position": 3},
        ])
    after = store.get_document(alice, doc["id"])
    assert after["revision"] == 1
    assert after["text"] == before["text"]


def test_undo_without_history(store, alice):
    doc = store.create_document(alice, REFERENCE)
    with pytest.raises(CommandError) as exc:
        store.undo(alice, doc["id"])
    assert exc.value.code == "CMD_NOTHING_TO_UNDO"


def test_histories_are_per_session(store, alice):
    other = store.login("alice", "wonder").token
    doc = store.create_document(alice, REFERENCE)
    store.apply_commands(alice, doc["id"], 1, [
        {"cmd": "MoveMilestone", "name": "release", "position": 10},
    ])
    with pytest.raises(CommandError) as exc:
        store.undo(other, doc["id"])
    assert exc.value.code == "CMD_NOTHING_TO_UNDO"


def test_concurrent_conflicting_batches(store, alice):
    doc = store.create_document(alice, REFERENCE)
    barrier = threading.Barrier(2)
    outcomes = []

    def contender(position):
        barrier.wait()
        try:
            store.apply_commands(alice, doc["id"], 1, [
                {"cmd": "MoveMilestone", "name": "release", "position": position},
            ])
            outcomes.append("ok")
        except RevisionConflict:
            outcomes.append("conflict")

    threads = [threading.Thread(target=contender, args=(p,)) for p in (11, 12)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(outcomes) == ["conflict", "ok"]
    assert store.get_document(alice, doc["id"])["revision"] == 2


def test_drafts_bypass_validation_and_round_trip(store, alice):
    doc = store.create_document(alice, MINIMAL)
    assert store.get_draft(alice, doc["id"]) is None
    junk = "process oh no // not even close\n\"unterminated"
    store.save_draft(alice, doc["id"], junk)
    assert store.get_draft(alice, doc["id"]) == junk
    store.delete_draft(alice, doc["id"])
    assert store.get_draft(alice, doc["id"]) is None


def test_draft_survives_store_restart(tmp_path):
    data = tmp_path / "data"
    store = DocumentStore(data)
    store.create_user("u", "p")
    token = store.login("u", "p").token
    doc = store.create_document(token, MINIMAL)
    draft = "work in progress\nwith a second line"
    store.save_draft(token, doc["id"], draft)

    reopened = DocumentStore(data)
    token2 = reopened.login("u", "p").token
    assert reopened.get_draft(token2, doc["id"]) == draft
    assert reopened.get_document(token2, doc["id"])["revision"] == doc["revision"]


def test_documents_survive_store_restart(tmp_path):
    data = tmp_path / "data"
    store = DocumentStore(data)
    store.create_user("u", "p")
    token = store.login("u", "p").token
    doc = store.create_document(token, REFERENCE)
    text = store.get_document(token, doc["id"])["text"]

    reopened = DocumentStore(data)
    token2 = reopened.login("u", "p").token
    assert reopened.get_document(token2, doc["id"])["text"] == text


def test_sessions_do_not_survive_restart(tmp_path):
    data = tmp_path / "data"
    store = DocumentStore(data)
    store.create_user("u", "p")
    token = store.login("u", "p").token
    reopened = DocumentStore(data)
    with pytest.raises(AuthRequired):
        reopened.list_files(token)


def test_validate_document_stored_and_given_text(store, alice):
    doc = store.create_document(alice, REFERENCE)
    assert store.validate_document(alice, doc["id"]) == []
    diags = store.validate_document(alice, doc["id"], "process")
    assert diags and diags[0].code.startswith("PARSE")


def _without_ids(view_json: dict) -> dict:
    # node ids are session-local; two parses of the same text differ in them
    return {**view_json,
            "entries": [{k: v for k, v in e.items() if k != "id"}
                        for e in view_json["entries"]]}


def test_get_view_matches_library(store, alice):
    doc = store.create_document(alice, REFERENCE)
    via_store = store.get_view(alice, doc["id"], "scope-plan",
                               {"layer": "departments", "scope": "engineering"})
    from procplan.model import resolve
    from procplan.syntax import parse
    resolved, _ = resolve(parse(REFERENCE).model)
    direct = views.scope_plan(resolved, "departments", "engineering")
    assert _without_ids(via_store.to_json()) == _without_ids(direct.to_json())


def test_description_edit_reflected_in_views(store, alice):
    doc = store.create_document(alice, REFERENCE)
    store.apply_commands(alice, doc["id"], 1, [
        {"cmd": "SetDescription",
         "target": {"kind": "milestone", "milestone": "release"},
         "description": "shipping day"},
    ])
    view = store.get_view(alice, doc["id"], "milestone-list", {})
    entry = next(e for e in view.entries if e.name == "release")
    assert entry.description == "shipping day"


def test_get_view_unknown_subject(store, alice):
    doc = store.create_document(alice, REFERENCE)
    with pytest.raises(views.UnknownViewSubject):
        store.get_view(alice, doc["id"], "scope-plan",
                       {"layer": "departments", "scope": "ghost"})
    with pytest.raises(NotFound):
        store.get_view(alice, doc["id"], "bogus-kind", {})


def test_create_document_rejects_invalid(store, alice):
    with pytest.raises(ValidationFailed):
        store.create_document(alice, "process")
