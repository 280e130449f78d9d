"""Core model: registry, lookup, name queries, resolution."""

from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from procplan.model import (
    Diagnostic,
    Layer,
    Milestone,
    NodeId,
    ProcessHeader,
    ProcessModel,
    Responsibility,
    ResponsibilityKind,
    ResultArtifact,
    Scope,
    Severity,
    TimelineSpec,
    build_model,
    new_node_id,
    resolve,
)
from procplan import commands as eng

from helpers import random_model


def header(weeks: int = 10) -> ProcessHeader:
    return ProcessHeader(name="P", version="1", timeline=TimelineSpec.weeks(weeks))


def small_model() -> ProcessModel:
    m1 = Milestone(name="M1", position=3,
                   results=[ResultArtifact(name="doc", description="d")])
    m2 = Milestone(name="M2", position=7)
    scope = Scope(
        name="unit", layer_name="dept",
        responsibilities=[Responsibility(kind=ResponsibilityKind.RESPONSIBLE,
                                         as_milestone="M1")],
    )
    return build_model(header(), [Layer(name="dept")], [m1, m2], [scope])


def test_build_empty_process():
    model = build_model(header())
    assert model.layers == [] and model.milestones == [] and model.scopes == []
    # the header owns no id-carrying nodes, so the registry is empty
    assert len(model.registry) == 0


def test_build_registry_counts_every_node_once():
    model = small_model()
    # independent traversal of the inputs: layer + 2 milestones + 1 artifact
    # + 1 scope + 1 responsibility
    expected = 1 + 2 + 1 + 1 + 1
    assert len(model.registry) == expected
    seen = list(model.iter_nodes())
    assert len(seen) == expected
    for node in seen:
        assert model.lookup(node.id) is node


def test_build_is_total_for_duplicate_names():
    dup_a = Milestone(name="M", position=1)
    dup_b = Milestone(name="M", position=2)
    model = build_model(header(), [], [dup_a, dup_b], [])
    assert model.milestones_by_name("M") == [dup_a, dup_b]


def test_lookup_existing_and_absent():
    model = small_model()
    milestone = model.milestones[0]
    assert model.lookup(milestone.id) is milestone
    assert model.lookup(new_node_id()) is None


def test_lookup_after_remove_command():
    model = small_model()
    removed_id = model.milestones_by_name("M2")[0].id
    eng.apply(model, eng.History(), eng.RemoveMilestone("M2"))
    assert model.lookup(removed_id) is None


def test_milestones_by_name():
    model = small_model()
    assert [m.name for m in model.milestones_by_name("M1")] == ["M1"]
    assert model.milestones_by_name("nope") == []


def test_resolve_single_candidate():
    model = small_model()
    resolved, diags = resolve(model)
    assert diags == []
    resp = model.scopes[0].responsibilities[0]
    target = model.milestones_by_name("M1")[0]
    assert resolved.edges == {resp.id: target.id}
    assert resolved.reverse_edges[target.id] == [resp.id]
    assert resolved.reverse_edges[model.milestones[1].id] == []


def test_resolve_dangling_reference():
    scope = Scope(name="s", layer_name="dept", responsibilities=[
        Responsibility(kind=ResponsibilityKind.NOTICING, as_milestone="MX"),
    ])
    model = build_model(header(), [Layer(name="dept")], [], [scope])
    resolved, diags = resolve(model)
    assert resolved is None
    assert [d.code for d in diags] == ["DANGLING_REF"]
    assert diags[0].severity is Severity.ERROR


def test_resolve_duplicate_milestone():
    model = build_model(
        header(), [],
        [Milestone(name="M1", position=1), Milestone(name="M1", position=2)],
        [Scope(name="s", layer_name="l", responsibilities=[
            Responsibility(kind=ResponsibilityKind.CONTRIBUTING, as_milestone="M1"),
        ])],
    )
    resolved, diags = resolve(model)
    assert resolved is None
    assert "DUP_MILESTONE" in {d.code for d in diags}


@given(st.integers(0, 10**9))
def test_resolution_totality(seed):
    """resolve succeeds iff milestone names are distinct and every
    as_milestone occurs among them."""
    rng = random.Random(seed)
    model = random_model(rng, max_milestones=8, max_scopes=4)
    resolved, diags = resolve(model)
    assert resolved is not None and diags == []

    mutation = rng.choice(["dup", "dangle", "none"])
    if mutation == "dup" and model.milestones:
        clone_name = rng.choice(model.milestones).name
        model.milestones.append(Milestone(name=clone_name, position=0))
        model.rebuild_registry()
        resolved, diags = resolve(model)
        assert resolved is None
        assert {d.code for d in diags} <= {"DUP_MILESTONE", "DANGLING_REF"}
        assert "DUP_MILESTONE" in {d.code for d in diags}
    elif mutation == "dangle" and model.scopes:
        scope = rng.choice(model.scopes)
        scope.responsibilities.append(
            Responsibility(kind=ResponsibilityKind.NOTICING, as_milestone="missing_one"))
        model.rebuild_registry()
        resolved, diags = resolve(model)
        assert resolved is None
        assert {d.code for d in diags} == {"DANGLING_REF"}


@given(st.integers(0, 10**9))
def test_edge_inverse_duality(seed):
    rng = random.Random(seed)
    model = random_model(rng, max_milestones=10, max_scopes=5)
    resolved, _ = resolve(model)
    assert resolved is not None
    assert all(r.id in resolved.edges
               for s in model.scopes for r in s.responsibilities)
    for resp_id, milestone_id in resolved.edges.items():
        assert resp_id in resolved.reverse_edges[milestone_id]
    for milestone_id, resp_ids in resolved.reverse_edges.items():
        for resp_id in resp_ids:
            assert resolved.edges[resp_id] == milestone_id


@given(st.integers(0, 10**9))
def test_registry_completeness(seed):
    rng = random.Random(seed)
    model = random_model(rng, max_milestones=10, max_scopes=5)
    nodes = list(model.iter_nodes())
    assert len(model.registry) == len(nodes)
    for node in nodes:
        assert model.lookup(node.id) is node


VISUAL_FIELD_NAMES = {
    "icon", "icon_key", "icon_file", "color", "colour", "pixel", "px",
    "x", "y", "width", "height", "font", "style",
}


@pytest.mark.parametrize("cls", [
    ProcessHeader, TimelineSpec, Layer, Milestone, ResultArtifact,
    Scope, Responsibility, ProcessModel, Diagnostic,
])
def test_no_visual_attributes(cls):
    names = {f.name for f in dataclasses.fields(cls)}
    assert not names & VISUAL_FIELD_NAMES


def test_node_ids_never_reused():
    seen = {new_node_id() for _ in range(1000)}
    assert len(seen) == 1000


def test_structural_equality_ignores_ids():
    a = small_model()
    b = small_model()
    assert a == b
    assert a.milestones[0].id != b.milestones[0].id
    b.milestones[0].position = 99
    assert a != b


def test_header_invariants():
    with pytest.raises(ValueError):
        ProcessHeader(name="", version="1", timeline=TimelineSpec.weeks(1))
    with pytest.raises(ValueError):
        TimelineSpec.weeks(0)
    from datetime import date
    with pytest.raises(ValueError):
        TimelineSpec.calendar(date(2024, 5, 1), date(2024, 5, 1))
    assert TimelineSpec.calendar(date(2024, 5, 1), date(2024, 5, 11)).position_bound() == 10
