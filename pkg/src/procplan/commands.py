"""Reversible edit commands and undo/redo history for one document.

Commands are plain, name-addressed data: they identify their targets by
milestone/layer/scope names rather than node ids, so a recorded command
stays applicable after the document has been re-parsed (ids are
session-local).  Applying a command mutates the model in place, keeps the
registry in sync, and yields the inverse command sequence that undoes it.
All preconditions are checked before the first mutation, so a failing
command leaves the model untouched.

Undo restores canonical-text equality, not node-id equality: nodes
re-created by an inverse get fresh ids, but print_model of the undone
model is byte-identical to the original.

Wire format (the service's command endpoint): one JSON object per command,
``{"cmd": "<Variant>", ...args}`` with the argument names below matching
the dataclass fields; spans are ``[start, end]`` arrays, responsibility
kinds are the DSL keywords ``resp``/``cont``/``noti``.
"""

from __future__ import annotations

import re
from dataclasses import MISSING, dataclass, field, fields
from typing import Callable, Optional, Union

from .model import (
    Layer,
    Milestone,
    ProcessModel,
    Responsibility,
    ResponsibilityKind,
    ResultArtifact,
    Scope,
)

# Error codes (stable contract, surfaced by the service as HTTP 422)
CMD_TARGET_MISSING = "CMD_TARGET_MISSING"
CMD_CONFLICT = "CMD_CONFLICT"
CMD_INVALID_ARG = "CMD_INVALID_ARG"
CMD_NOTHING_TO_UNDO = "CMD_NOTHING_TO_UNDO"
CMD_NOTHING_TO_REDO = "CMD_NOTHING_TO_REDO"
CMD_BATCH_FAILED = "CMD_BATCH_FAILED"


class CommandError(Exception):
    """A command could not be applied; the model is unchanged."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class BatchError(CommandError):
    """A batch failed at `index`; the whole batch was rolled back."""

    def __init__(self, index: int, cause: CommandError):
        super().__init__(CMD_BATCH_FAILED, f"command {index} failed: {cause}")
        self.index = index
        self.cause = cause


# ---------------------------------------------------------------------------
# Command vocabulary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Target:
    """Addresses a describable node for SetDescription.

    kind is one of "layer", "milestone", "scope", "artifact"; the relevant
    name fields for that kind must be set.
    """

    kind: str
    layer: Optional[str] = None
    milestone: Optional[str] = None
    scope: Optional[str] = None
    artifact: Optional[str] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for key in ("layer", "milestone", "scope", "artifact"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@dataclass(frozen=True)
class AddLayer:
    name: str
    description: str = ""
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveLayer:
    name: str


@dataclass(frozen=True)
class AddMilestone:
    name: str
    position: int
    description: str = ""
    span: Optional[tuple[int, int]] = None
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveMilestone:
    name: str
    cascade: bool = False


@dataclass(frozen=True)
class MoveMilestone:
    name: str
    position: int


@dataclass(frozen=True)
class RenameMilestone:
    name: str
    new_name: str


@dataclass(frozen=True)
class SetSpan:
    name: str
    span: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class SetDescription:
    target: Target
    description: str


@dataclass(frozen=True)
class AddResult:
    milestone: str
    name: str
    description: str = ""
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveResult:
    milestone: str
    name: str


@dataclass(frozen=True)
class AddScope:
    layer: str
    name: str
    description: str = ""
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveScope:
    layer: str
    name: str


@dataclass(frozen=True)
class AddResponsibility:
    layer: str
    scope: str
    kind: ResponsibilityKind
    milestone: str
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveResponsibility:
    layer: str
    scope: str
    milestone: str


@dataclass(frozen=True)
class SetResponsibilityKind:
    layer: str
    scope: str
    milestone: str
    kind: ResponsibilityKind


Command = Union[
    AddLayer, RemoveLayer,
    AddMilestone, RemoveMilestone, MoveMilestone, RenameMilestone,
    SetSpan, SetDescription,
    AddResult, RemoveResult,
    AddScope, RemoveScope,
    AddResponsibility, RemoveResponsibility, SetResponsibilityKind,
]


# ---------------------------------------------------------------------------
# History
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HistorySlot:
    """One undoable step: the applied command(s) and, in undo application
    order, the commands that revert them."""

    commands: tuple[Command, ...]
    inverses: tuple[Command, ...]


@dataclass
class History:
    undo_stack: list[HistorySlot] = field(default_factory=list)
    redo_stack: list[HistorySlot] = field(default_factory=list)
    revision: int = 0


# ---------------------------------------------------------------------------
# Argument and target validation
# ---------------------------------------------------------------------------

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _check_ident(name: object, what: str) -> str:
    if not isinstance(name, str) or not _IDENT_RE.match(name):
        raise CommandError(CMD_INVALID_ARG, f"{what} {name!r} is not a valid identifier")
    return name


def _check_position(value: object, what: str = "position") -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise CommandError(CMD_INVALID_ARG, f"{what} must be a non-negative integer, got {value!r}")
    return value


def _check_span(span: object) -> Optional[tuple[int, int]]:
    if span is None:
        return None
    if not isinstance(span, tuple) or len(span) != 2:
        raise CommandError(CMD_INVALID_ARG, f"span must be a (start, end) pair, got {span!r}")
    start, end = span
    _check_position(start, "span start")
    _check_position(end, "span end")
    if not start < end:
        raise CommandError(CMD_INVALID_ARG, f"span start {start} must be before span end {end}")
    return span


def _check_index(index: Optional[int], length: int) -> int:
    if index is None:
        return length
    if not isinstance(index, int) or isinstance(index, bool) or not 0 <= index <= length:
        raise CommandError(CMD_INVALID_ARG, f"index {index!r} out of range 0..{length}")
    return index


def _find_milestone(model: ProcessModel, name: str) -> Milestone:
    found = model.milestones_by_name(name)
    if not found:
        raise CommandError(CMD_TARGET_MISSING, f"no milestone named {name!r}")
    if len(found) > 1:
        raise CommandError(CMD_CONFLICT, f"milestone name {name!r} is ambiguous")
    return found[0]


def _find_layer(model: ProcessModel, name: str) -> Layer:
    found = model.layers_by_name(name)
    if not found:
        raise CommandError(CMD_TARGET_MISSING, f"no layer named {name!r}")
    if len(found) > 1:
        raise CommandError(CMD_CONFLICT, f"layer name {name!r} is ambiguous")
    return found[0]


def _find_scope(model: ProcessModel, layer: str, name: str) -> Scope:
    scope = model.find_scope(layer, name)
    if scope is None:
        raise CommandError(CMD_TARGET_MISSING, f"no scope {name!r} in layer {layer!r}")
    return scope


def _find_responsibility(scope: Scope, milestone: str) -> Responsibility:
    for resp in scope.responsibilities:
        if resp.as_milestone == milestone:
            return resp
    raise CommandError(
        CMD_TARGET_MISSING,
        f"scope {scope.name!r} has no responsibility for milestone {milestone!r}",
    )


def _referencing_responsibilities(model: ProcessModel, name: str) -> list[tuple[Scope, int, Responsibility]]:
    refs = []
    for scope in model.scopes:
        for i, resp in enumerate(scope.responsibilities):
            if resp.as_milestone == name:
                refs.append((scope, i, resp))
    return refs


# ---------------------------------------------------------------------------
# Handlers: validate, mutate, return the inverse command sequence
# ---------------------------------------------------------------------------

def _apply_add_layer(model: ProcessModel, cmd: AddLayer) -> list[Command]:
    _check_ident(cmd.name, "layer name")
    if model.layers_by_name(cmd.name):
        raise CommandError(CMD_CONFLICT, f"layer {cmd.name!r} already exists")
    at = _check_index(cmd.index, len(model.layers))
    layer = Layer(name=cmd.name, description=cmd.description)
    model.layers.insert(at, layer)
    model.register(layer)
    return [RemoveLayer(cmd.name)]


def _apply_remove_layer(model: ProcessModel, cmd: RemoveLayer) -> list[Command]:
    layer = _find_layer(model, cmd.name)
    if any(s.layer_name == cmd.name for s in model.scopes):
        raise CommandError(CMD_CONFLICT, f"layer {cmd.name!r} still has scopes")
    index = model.layers.index(layer)
    model.layers.remove(layer)
    model.unregister(layer)
    return [AddLayer(layer.name, layer.description, index=index)]


def _apply_add_milestone(model: ProcessModel, cmd: AddMilestone) -> list[Command]:
    _check_ident(cmd.name, "milestone name")
    _check_position(cmd.position)
    _check_span(cmd.span)
    if model.milestones_by_name(cmd.name):
        raise CommandError(CMD_CONFLICT, f"milestone {cmd.name!r} already exists")
    at = _check_index(cmd.index, len(model.milestones))
    milestone = Milestone(
        name=cmd.name, position=cmd.position, span=cmd.span, description=cmd.description,
    )
    model.milestones.insert(at, milestone)
    model.register(milestone)
    return [RemoveMilestone(cmd.name, cascade=False)]


def _apply_remove_milestone(model: ProcessModel, cmd: RemoveMilestone) -> list[Command]:
    milestone = _find_milestone(model, cmd.name)
    refs = _referencing_responsibilities(model, cmd.name)
    if refs and not cmd.cascade:
        raise CommandError(
            CMD_CONFLICT,
            f"milestone {cmd.name!r} is referenced by {len(refs)} responsibilities "
            f"(remove them first, or remove with cascade)",
        )
    index = model.milestones.index(milestone)

    inverse: list[Command] = [AddMilestone(
        name=milestone.name, position=milestone.position,
        description=milestone.description, span=milestone.span, index=index,
    )]
    inverse.extend(
        AddResult(milestone=milestone.name, name=a.name, description=a.description)
        for a in milestone.results
    )
    # ascending index order so undo re-inserts each at its original slot
    for scope, resp_index, resp in refs:
        inverse.append(AddResponsibility(
            layer=scope.layer_name, scope=scope.name, kind=resp.kind,
            milestone=cmd.name, index=resp_index,
        ))
        scope.responsibilities.remove(resp)
        model.unregister(resp)

    model.milestones.remove(milestone)
    model.unregister(milestone)
    for artifact in milestone.results:
        model.unregister(artifact)
    return inverse


def _apply_move_milestone(model: ProcessModel, cmd: MoveMilestone) -> list[Command]:
    _check_position(cmd.position)
    milestone = _find_milestone(model, cmd.name)
    old = milestone.position
    milestone.position = cmd.position
    return [MoveMilestone(cmd.name, old)]


def _apply_rename_milestone(model: ProcessModel, cmd: RenameMilestone) -> list[Command]:
    _check_ident(cmd.new_name, "milestone name")
    milestone = _find_milestone(model, cmd.name)
    if model.milestones_by_name(cmd.new_name):
        raise CommandError(CMD_CONFLICT, f"milestone {cmd.new_name!r} already exists")
    milestone.name = cmd.new_name
    for _, _, resp in _referencing_responsibilities(model, cmd.name):
        resp.as_milestone = cmd.new_name
    return [RenameMilestone(cmd.new_name, cmd.name)]


def _apply_set_span(model: ProcessModel, cmd: SetSpan) -> list[Command]:
    _check_span(cmd.span)
    milestone = _find_milestone(model, cmd.name)
    old = milestone.span
    milestone.span = cmd.span
    return [SetSpan(cmd.name, old)]


def _describable(model: ProcessModel, target: Target):
    if target.kind == "layer":
        if target.layer is None:
            raise CommandError(CMD_INVALID_ARG, "layer target requires a layer name")
        return _find_layer(model, target.layer)
    if target.kind == "milestone":
        if target.milestone is None:
            raise CommandError(CMD_INVALID_ARG, "milestone target requires a milestone name")
        return _find_milestone(model, target.milestone)
    if target.kind == "scope":
        if target.layer is None or target.scope is None:
            raise CommandError(CMD_INVALID_ARG, "scope target requires layer and scope names")
        return _find_scope(model, target.layer, target.scope)
    if target.kind == "artifact":
        if target.milestone is None or target.artifact is None:
            raise CommandError(CMD_INVALID_ARG, "artifact target requires milestone and artifact names")
        milestone = _find_milestone(model, target.milestone)
        found = [a for a in milestone.results if a.name == target.artifact]
        if not found:
            raise CommandError(
                CMD_TARGET_MISSING,
                f"milestone {target.milestone!r} has no artifact {target.artifact!r}",
            )
        if len(found) > 1:
            raise CommandError(CMD_CONFLICT, f"artifact name {target.artifact!r} is ambiguous")
        return found[0]
    raise CommandError(CMD_INVALID_ARG, f"unknown description target kind {target.kind!r}")


def _apply_set_description(model: ProcessModel, cmd: SetDescription) -> list[Command]:
    if not isinstance(cmd.description, str):
        raise CommandError(CMD_INVALID_ARG, "description must be a string")
    node = _describable(model, cmd.target)
    old = node.description
    node.description = cmd.description
    return [SetDescription(cmd.target, old)]


def _apply_add_result(model: ProcessModel, cmd: AddResult) -> list[Command]:
    _check_ident(cmd.name, "artifact name")
    milestone = _find_milestone(model, cmd.milestone)
    if any(a.name == cmd.name for a in milestone.results):
        raise CommandError(
            CMD_CONFLICT,
            f"milestone {cmd.milestone!r} already has an artifact {cmd.name!r}",
        )
    at = _check_index(cmd.index, len(milestone.results))
    artifact = ResultArtifact(name=cmd.name, description=cmd.description)
    milestone.results.insert(at, artifact)
    model.register(artifact)
    return [RemoveResult(cmd.milestone, cmd.name)]


def _apply_remove_result(model: ProcessModel, cmd: RemoveResult) -> list[Command]:
    milestone = _find_milestone(model, cmd.milestone)
    found = [a for a in milestone.results if a.name == cmd.name]
    if not found:
        raise CommandError(
            CMD_TARGET_MISSING,
            f"milestone {cmd.milestone!r} has no artifact {cmd.name!r}",
        )
    artifact = found[0]
    index = milestone.results.index(artifact)
    milestone.results.remove(artifact)
    model.unregister(artifact)
    return [AddResult(cmd.milestone, artifact.name, artifact.description, index=index)]


def _apply_add_scope(model: ProcessModel, cmd: AddScope) -> list[Command]:
    _check_ident(cmd.name, "scope name")
    _find_layer(model, cmd.layer)
    if model.find_scope(cmd.layer, cmd.name) is not None:
        raise CommandError(
            CMD_CONFLICT, f"scope {cmd.name!r} already exists in layer {cmd.layer!r}",
        )
    at = _check_index(cmd.index, len(model.scopes))
    scope = Scope(name=cmd.name, layer_name=cmd.layer, description=cmd.description)
    model.scopes.insert(at, scope)
    model.register(scope)
    return [RemoveScope(cmd.layer, cmd.name)]


def _apply_remove_scope(model: ProcessModel, cmd: RemoveScope) -> list[Command]:
    scope = _find_scope(model, cmd.layer, cmd.name)
    index = model.scopes.index(scope)
    inverse: list[Command] = [AddScope(cmd.layer, cmd.name, scope.description, index=index)]
    inverse.extend(
        AddResponsibility(
            layer=cmd.layer, scope=cmd.name, kind=r.kind, milestone=r.as_milestone,
        )
        for r in scope.responsibilities
    )
    model.scopes.remove(scope)
    model.unregister(scope)
    for resp in scope.responsibilities:
        model.unregister(resp)
    return inverse


def _apply_add_responsibility(model: ProcessModel, cmd: AddResponsibility) -> list[Command]:
    if not isinstance(cmd.kind, ResponsibilityKind):
        raise CommandError(CMD_INVALID_ARG, f"invalid responsibility kind {cmd.kind!r}")
    scope = _find_scope(model, cmd.layer, cmd.scope)
    if not model.milestones_by_name(cmd.milestone):
        raise CommandError(CMD_TARGET_MISSING, f"no milestone named {cmd.milestone!r}")
    if any(r.as_milestone == cmd.milestone for r in scope.responsibilities):
        raise CommandError(
            CMD_CONFLICT,
            f"scope {cmd.scope!r} already has a responsibility for {cmd.milestone!r}",
        )
    at = _check_index(cmd.index, len(scope.responsibilities))
    resp = Responsibility(kind=cmd.kind, as_milestone=cmd.milestone)
    scope.responsibilities.insert(at, resp)
    model.register(resp)
    return [RemoveResponsibility(cmd.layer, cmd.scope, cmd.milestone)]


def _apply_remove_responsibility(model: ProcessModel, cmd: RemoveResponsibility) -> list[Command]:
    scope = _find_scope(model, cmd.layer, cmd.scope)
    resp = _find_responsibility(scope, cmd.milestone)
    index = scope.responsibilities.index(resp)
    scope.responsibilities.remove(resp)
    model.unregister(resp)
    return [AddResponsibility(
        layer=cmd.layer, scope=cmd.scope, kind=resp.kind,
        milestone=cmd.milestone, index=index,
    )]


def _apply_set_responsibility_kind(model: ProcessModel, cmd: SetResponsibilityKind) -> list[Command]:
    if not isinstance(cmd.kind, ResponsibilityKind):
        raise CommandError(CMD_INVALID_ARG, f"invalid responsibility kind {cmd.kind!r}")
    scope = _find_scope(model, cmd.layer, cmd.scope)
    resp = _find_responsibility(scope, cmd.milestone)
    old = resp.kind
    resp.kind = cmd.kind
    return [SetResponsibilityKind(cmd.layer, cmd.scope, cmd.milestone, old)]


_HANDLERS: dict[type, Callable[[ProcessModel, Command], list[Command]]] = {
    AddLayer: _apply_add_layer,
    RemoveLayer: _apply_remove_layer,
    AddMilestone: _apply_add_milestone,
    RemoveMilestone: _apply_remove_milestone,
    MoveMilestone: _apply_move_milestone,
    RenameMilestone: _apply_rename_milestone,
    SetSpan: _apply_set_span,
    SetDescription: _apply_set_description,
    AddResult: _apply_add_result,
    RemoveResult: _apply_remove_result,
    AddScope: _apply_add_scope,
    RemoveScope: _apply_remove_scope,
    AddResponsibility: _apply_add_responsibility,
    RemoveResponsibility: _apply_remove_responsibility,
    SetResponsibilityKind: _apply_set_responsibility_kind,
}


def _dispatch(model: ProcessModel, cmd: Command) -> list[Command]:
    handler = _HANDLERS.get(type(cmd))
    if handler is None:
        raise CommandError(CMD_INVALID_ARG, f"unknown command {type(cmd).__name__}")
    return handler(model, cmd)


def _run_atomic(model: ProcessModel, cmds: tuple[Command, ...] | list[Command]) -> list[Command]:
    """Apply a command sequence all-or-nothing.

    Returns the flat inverse sequence (in undo application order).  On
    failure the already-applied prefix is rolled back and a BatchError
    carrying the failing index is raised.
    """
    applied: list[list[Command]] = []
    for i, cmd in enumerate(cmds):
        try:
            applied.append(_dispatch(model, cmd))
        except CommandError as exc:
            for inverse_seq in reversed(applied):
                for inverse in inverse_seq:
                    _dispatch(model, inverse)
            raise BatchError(i, exc) from exc
    return [inv for seq in reversed(applied) for inv in seq]


# ---------------------------------------------------------------------------
# Engine operations
# ---------------------------------------------------------------------------

def apply(model: ProcessModel, history: History, cmd: Command) -> None:
    """Apply one command; push its undo slot; clear the redo stack."""
    inverses = _dispatch(model, cmd)
    history.undo_stack.append(HistorySlot((cmd,), tuple(inverses)))
    history.redo_stack.clear()
    history.revision += 1


def apply_batch(model: ProcessModel, history: History, cmds: list[Command]) -> None:
    """Apply several commands atomically as one undo slot.

    All-or-nothing: if any command fails, the model and history are
    unchanged and the raised BatchError names the failing index.  An empty
    batch is a no-op (history untouched).
    """
    if not cmds:
        return
    inverses = _run_atomic(model, cmds)
    history.undo_stack.append(HistorySlot(tuple(cmds), tuple(inverses)))
    history.redo_stack.clear()
    history.revision += 1


def undo(model: ProcessModel, history: History) -> None:
    """Revert the most recent slot and move it to the redo stack."""
    if not history.undo_stack:
        raise CommandError(CMD_NOTHING_TO_UNDO, "nothing to undo")
    slot = history.undo_stack[-1]
    _run_atomic(model, slot.inverses)
    history.undo_stack.pop()
    history.redo_stack.append(slot)
    history.revision += 1


def redo(model: ProcessModel, history: History) -> None:
    """Re-apply the most recently undone slot."""
    if not history.redo_stack:
        raise CommandError(CMD_NOTHING_TO_REDO, "nothing to redo")
    slot = history.redo_stack[-1]
    _run_atomic(model, slot.commands)
    history.redo_stack.pop()
    history.undo_stack.append(slot)
    history.revision += 1


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

_WIRE_NAMES: dict[type, str] = {cls: cls.__name__ for cls in _HANDLERS}
_WIRE_TYPES: dict[str, type] = {name: cls for cls, name in _WIRE_NAMES.items()}


def command_to_json(cmd: Command) -> dict:
    out: dict = {"cmd": _WIRE_NAMES[type(cmd)]}
    for f in fields(cmd):
        value = getattr(cmd, f.name)
        if isinstance(value, Target):
            value = value.to_json()
        elif isinstance(value, ResponsibilityKind):
            value = value.value
        elif isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


def _arg_str(value: object, name: str) -> str:
    if not isinstance(value, str):
        raise CommandError(CMD_INVALID_ARG, f"{name} must be a string, got {value!r}")
    return value


def _arg_int(value: object, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise CommandError(CMD_INVALID_ARG, f"{name} must be an integer, got {value!r}")
    return value


def _arg_bool(value: object, name: str) -> bool:
    if not isinstance(value, bool):
        raise CommandError(CMD_INVALID_ARG, f"{name} must be a boolean, got {value!r}")
    return value


def _arg_span(value: object, name: str) -> Optional[tuple[int, int]]:
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise CommandError(CMD_INVALID_ARG, f"{name} must be a [start, end] pair or null")
    return (_arg_int(value[0], f"{name} start"), _arg_int(value[1], f"{name} end"))


def _arg_index(value: object, name: str) -> Optional[int]:
    if value is None:
        return None
    return _arg_int(value, name)


def _arg_kind(value: object, name: str) -> ResponsibilityKind:
    try:
        return ResponsibilityKind(value)
    except ValueError:
        raise CommandError(
            CMD_INVALID_ARG, f"{name} must be one of 'resp', 'cont', 'noti', got {value!r}"
        ) from None


def _arg_target(value: object, name: str) -> Target:
    if not isinstance(value, dict):
        raise CommandError(CMD_INVALID_ARG, f"{name} must be an object")
    allowed = {"kind", "layer", "milestone", "scope", "artifact"}
    unknown = set(value) - allowed
    if unknown:
        raise CommandError(CMD_INVALID_ARG, f"unknown {name} fields: {sorted(unknown)}")
    if "kind" not in value:
        raise CommandError(CMD_INVALID_ARG, f"{name} requires a kind")
    kwargs = {k: _arg_str(v, f"{name}.{k}") for k, v in value.items()}
    return Target(**kwargs)


_ARG_PARSERS: dict[str, Callable[[object, str], object]] = {
    "name": _arg_str,
    "new_name": _arg_str,
    "description": _arg_str,
    "milestone": _arg_str,
    "layer": _arg_str,
    "scope": _arg_str,
    "position": _arg_int,
    "span": _arg_span,
    "index": _arg_index,
    "cascade": _arg_bool,
    "kind": _arg_kind,
    "target": _arg_target,
}


def command_from_json(data: object) -> Command:
    """Parse one wire command object; raises CommandError(CMD_INVALID_ARG)."""
    if not isinstance(data, dict):
        raise CommandError(CMD_INVALID_ARG, "command must be a JSON object")
    name = data.get("cmd")
    cls = _WIRE_TYPES.get(name)  # type: ignore[arg-type]
    if cls is None:
        raise CommandError(CMD_INVALID_ARG, f"unknown command {name!r}")
    cls_fields = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(cls_fields) - {"cmd"}
    if unknown:
        raise CommandError(CMD_INVALID_ARG, f"unknown {name} arguments: {sorted(unknown)}")
    kwargs = {}
    for fname, f in cls_fields.items():
        if fname in data:
            kwargs[fname] = _ARG_PARSERS[fname](data[fname], fname)
        elif f.default is MISSING and f.default_factory is MISSING:
            raise CommandError(CMD_INVALID_ARG, f"{name} requires argument {fname!r}")
    return cls(**kwargs)
