"""Layout-free projections of a resolved model for organizational views.

Each view is recomputed on demand from the single underlying model, so an
edit through the command engine is reflected in every view by construction.
View models carry names, positions, access kinds and payload data only;
icons, colors and pixel coordinates are entirely the renderer's business.

The serialized shape (stable field names) is:

    {"view_kind": "ScopePlan" | "MilestoneList" | "MilestoneIO" | "LayerInvolvement",
     "subject": {...view parameters...},
     "entries": [{"id": int, "name": str, "position": int, "span": [a, b] | null,
                  "access": "resp" | "cont" | "noti",   # ScopePlan / LayerInvolvement
                  "role": "input" | "output",           # MilestoneIO
                  "description": str,                    # ScopePlan / MilestoneList
                  "results": [{"name": str, "description": str}]  # MilestoneList / MilestoneIO
                 }]}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .model import (
    Milestone,
    NodeId,
    ResolvedModel,
    ResponsibilityKind,
    Scope,
)


class UnknownViewSubject(LookupError):
    """The requested layer/scope/milestone does not exist in the document."""

    code = "UNKNOWN_VIEW_SUBJECT"


class ViewKind(Enum):
    SCOPE_PLAN = "ScopePlan"
    MILESTONE_LIST = "MilestoneList"
    MILESTONE_IO = "MilestoneIO"
    LAYER_INVOLVEMENT = "LayerInvolvement"


@dataclass(frozen=True)
class ViewEntry:
    """One milestone as seen by a view; access is set exactly for the
    scope-plan and layer-involvement views."""

    milestone_id: NodeId
    name: str
    position: int
    span: Optional[tuple[int, int]] = None
    access: Optional[ResponsibilityKind] = None
    role: Optional[str] = None
    description: Optional[str] = None
    results: Optional[tuple[tuple[str, str], ...]] = None

    def to_json(self) -> dict:
        out: dict = {
            "id": self.milestone_id.value,
            "name": self.name,
            "position": self.position,
            "span": list(self.span) if self.span is not None else None,
        }
        if self.access is not None:
            out["access"] = self.access.value
        if self.role is not None:
            out["role"] = self.role
        if self.description is not None:
            out["description"] = self.description
        if self.results is not None:
            out["results"] = [{"name": n, "description": d} for n, d in self.results]
        return out


@dataclass(frozen=True)
class ViewModel:
    view_kind: ViewKind
    subject: dict
    entries: tuple[ViewEntry, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "view_kind": self.view_kind.value,
            "subject": dict(self.subject),
            "entries": [entry.to_json() for entry in self.entries],
        }


def _timeline_sorted(model_milestones: list[Milestone], chosen: list[Milestone]) -> list[Milestone]:
    """Order by timeline position, ties broken by document order."""
    doc_index = {m.id: i for i, m in enumerate(model_milestones)}
    return sorted(chosen, key=lambda m: (m.position, doc_index[m.id]))


def _artifact_pairs(milestone: Milestone) -> tuple[tuple[str, str], ...]:
    return tuple((a.name, a.description) for a in milestone.results)


def _require_scope(resolved: ResolvedModel, layer: str, scope: str) -> Scope:
    found = resolved.model.find_scope(layer, scope)
    if found is None:
        raise UnknownViewSubject(f"no scope {scope!r} in layer {layer!r}")
    return found


def scope_plan(resolved: ResolvedModel, layer: str, scope: str) -> ViewModel:
    """The milestones one organizational unit accesses, with its access kind."""
    scope_node = _require_scope(resolved, layer, scope)
    kind_by_milestone: dict[NodeId, ResponsibilityKind] = {}
    for resp in scope_node.responsibilities:
        target = resolved.edges.get(resp.id)
        if target is not None and target not in kind_by_milestone:
            kind_by_milestone[target] = resp.kind
    chosen = [m for m in resolved.model.milestones if m.id in kind_by_milestone]
    entries = tuple(
        ViewEntry(
            milestone_id=m.id, name=m.name, position=m.position, span=m.span,
            access=kind_by_milestone[m.id], description=m.description,
        )
        for m in _timeline_sorted(resolved.model.milestones, chosen)
    )
    return ViewModel(ViewKind.SCOPE_PLAN, {"layer": layer, "scope": scope}, entries)


def milestone_list(resolved: ResolvedModel) -> ViewModel:
    """Every milestone exactly once, sorted by position then document order."""
    entries = tuple(
        ViewEntry(
            milestone_id=m.id, name=m.name, position=m.position, span=m.span,
            description=m.description, results=_artifact_pairs(m),
        )
        for m in _timeline_sorted(resolved.model.milestones, list(resolved.model.milestones))
    )
    return ViewModel(ViewKind.MILESTONE_LIST, {}, entries)


def milestone_io(resolved: ResolvedModel, milestone: str) -> ViewModel:
    """Inputs and outputs of one milestone.

    Outputs are the milestone's own result artifacts.  Inputs are the
    artifacts of every strictly earlier milestone that shares at least one
    referencing scope with the subject.
    """
    model = resolved.model
    candidates = model.milestones_by_name(milestone)
    if len(candidates) != 1:
        raise UnknownViewSubject(f"no unique milestone named {milestone!r}")
    subject = candidates[0]

    def referencing_scopes(m: Milestone) -> set[NodeId]:
        scopes: set[NodeId] = set()
        for scope in model.scopes:
            for resp in scope.responsibilities:
                if resolved.edges.get(resp.id) == m.id:
                    scopes.add(scope.id)
        return scopes

    subject_scopes = referencing_scopes(subject)
    inputs = [
        m for m in model.milestones
        if m.position < subject.position and subject_scopes & referencing_scopes(m)
    ]
    entries = [
        ViewEntry(
            milestone_id=m.id, name=m.name, position=m.position, span=m.span,
            role="input", results=_artifact_pairs(m),
        )
        for m in _timeline_sorted(model.milestones, inputs)
    ]
    entries.append(ViewEntry(
        milestone_id=subject.id, name=subject.name, position=subject.position,
        span=subject.span, role="output", results=_artifact_pairs(subject),
    ))
    return ViewModel(ViewKind.MILESTONE_IO, {"milestone": milestone}, tuple(entries))


def layer_involvement(resolved: ResolvedModel, layer: str) -> ViewModel:
    """Milestones touched by any scope of a layer, tagged with the strongest
    access kind among those scopes (resp > cont > noti)."""
    model = resolved.model
    if not model.layers_by_name(layer):
        raise UnknownViewSubject(f"no layer named {layer!r}")
    strongest: dict[NodeId, ResponsibilityKind] = {}
    for scope in model.scopes:
        if scope.layer_name != layer:
            continue
        for resp in scope.responsibilities:
            target = resolved.edges.get(resp.id)
            if target is None:
                continue
            current = strongest.get(target)
            if current is None or resp.kind.rank > current.rank:
                strongest[target] = resp.kind
    chosen = [m for m in model.milestones if m.id in strongest]
    entries = tuple(
        ViewEntry(
            milestone_id=m.id, name=m.name, position=m.position, span=m.span,
            access=strongest[m.id],
        )
        for m in _timeline_sorted(model.milestones, chosen)
    )
    return ViewModel(ViewKind.LAYER_INVOLVEMENT, {"layer": layer}, entries)
