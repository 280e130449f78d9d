"""Abstract syntax graph for milestone-plan documents.

Node types, the per-document node registry, and name resolution from
responsibilities to the milestones they reference.  Nothing in here knows
about concrete syntax or about rendering: nodes carry no visual attributes,
and the optional source positions attached by the parser are metadata that
never participates in equality.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Iterator, Optional, Union

# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

# Lexing
LEX_CHAR = "LEX_CHAR"
LEX_STRING = "LEX_STRING"
# Parsing
PARSE_EXPECTED = "PARSE_EXPECTED"
PARSE_EOF = "PARSE_EOF"
PARSE_VALUE = "PARSE_VALUE"
# Resolution
DANGLING_REF = "DANGLING_REF"
DUP_MILESTONE = "DUP_MILESTONE"
# Validation
TIME_ORDER = "TIME_ORDER"
POS_BOUNDS = "POS_BOUNDS"
DUP_SCOPE = "DUP_SCOPE"
DUP_RESP = "DUP_RESP"
DUP_LAYER = "DUP_LAYER"
DUP_RESULT = "DUP_RESULT"
UNKNOWN_LAYER = "UNKNOWN_LAYER"
NO_RESPONSIBLE = "NO_RESPONSIBLE"

#: Closed set of diagnostic codes; part of the public contract (CLI lines,
#: validation endpoint payloads).
DIAGNOSTIC_CODES = frozenset({
    LEX_CHAR, LEX_STRING,
    PARSE_EXPECTED, PARSE_EOF, PARSE_VALUE,
    DANGLING_REF, DUP_MILESTONE,
    TIME_ORDER, POS_BOUNDS, DUP_SCOPE, DUP_RESP, DUP_LAYER, DUP_RESULT,
    UNKNOWN_LAYER, NO_RESPONSIBLE,
})


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """A coded, located problem reported by any processing phase."""

    severity: Severity
    code: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    # session-local plumbing, excluded from equality like node ids everywhere
    node_id: Optional["NodeId"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.code not in DIAGNOSTIC_CODES:
            raise ValueError(f"unknown diagnostic code {self.code!r}")

    def to_json(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "line": self.line,
            "column": self.column,
        }

    def render(self, path: str = "<input>") -> str:
        """One-line compiler-style rendering: path:line:col: severity CODE message."""
        line = self.line if self.line is not None else 0
        col = self.column if self.column is not None else 0
        return f"{path}:{line}:{col}: {self.severity.value} {self.code} {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


# ---------------------------------------------------------------------------
# Node identity
# ---------------------------------------------------------------------------

_id_counter = itertools.count(1)
_id_lock = threading.Lock()


@dataclass(frozen=True)
class NodeId:
    """Opaque node handle, unique for the lifetime of the process.

    Ids are session-local plumbing: they are never written to the textual
    format, and re-created nodes (undo, re-parse) receive fresh ids.
    """

    value: int


def new_node_id() -> NodeId:
    with _id_lock:
        return NodeId(next(_id_counter))


# Source position (line, column) recorded by the parser; absent on nodes
# built programmatically.  Excluded from equality so that a parsed model
# compares structurally equal to a hand-built one.
SourcePos = tuple[int, int]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class TimelineKind(Enum):
    WEEKS = "weeks"
    CALENDAR = "calendar"


@dataclass(frozen=True)
class TimelineSpec:
    """The document's time axis: a fixed week count or a calendar range."""

    kind: TimelineKind
    length_weeks: Optional[int] = None
    start_date: Optional[date] = None
    end_date: Optional[date] = None

    def __post_init__(self) -> None:
        if self.kind is TimelineKind.WEEKS:
            if self.length_weeks is None or self.length_weeks < 1:
                raise ValueError("weeks timeline requires length_weeks >= 1")
            if self.start_date is not None or self.end_date is not None:
                raise ValueError("weeks timeline carries no dates")
        else:
            if self.start_date is None or self.end_date is None:
                raise ValueError("calendar timeline requires start and end dates")
            if not self.start_date < self.end_date:
                raise ValueError("calendar timeline requires start_date < end_date")
            if self.length_weeks is not None:
                raise ValueError("calendar timeline carries no week count")

    @classmethod
    def weeks(cls, length_weeks: int) -> "TimelineSpec":
        return cls(TimelineKind.WEEKS, length_weeks=length_weeks)

    @classmethod
    def calendar(cls, start_date: date, end_date: date) -> "TimelineSpec":
        return cls(TimelineKind.CALENDAR, start_date=start_date, end_date=end_date)

    def position_bound(self) -> int:
        """Largest valid timeline position: week count, or day span of the range."""
        if self.kind is TimelineKind.WEEKS:
            assert self.length_weeks is not None
            return self.length_weeks
        assert self.start_date is not None and self.end_date is not None
        return (self.end_date - self.start_date).days


@dataclass(frozen=True)
class ProcessHeader:
    name: str
    version: str
    timeline: TimelineSpec

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("process name must be non-empty")


class ResponsibilityKind(Enum):
    """How a scope accesses a milestone, in decreasing intensity."""

    RESPONSIBLE = "resp"
    CONTRIBUTING = "cont"
    NOTICING = "noti"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]

    @classmethod
    def from_keyword(cls, keyword: str) -> "ResponsibilityKind":
        return cls(keyword)


_KIND_RANK = {
    ResponsibilityKind.RESPONSIBLE: 3,
    ResponsibilityKind.CONTRIBUTING: 2,
    ResponsibilityKind.NOTICING: 1,
}


@dataclass
class Layer:
    name: str
    description: str = ""
    id: NodeId = field(default_factory=new_node_id, compare=False)
    src_pos: Optional[SourcePos] = field(default=None, compare=False, repr=False)


@dataclass
class ResultArtifact:
    name: str
    description: str = ""
    id: NodeId = field(default_factory=new_node_id, compare=False)
    src_pos: Optional[SourcePos] = field(default=None, compare=False, repr=False)


@dataclass
class Milestone:
    name: str
    position: int
    span: Optional[tuple[int, int]] = None
    results: list[ResultArtifact] = field(default_factory=list)
    description: str = ""
    id: NodeId = field(default_factory=new_node_id, compare=False)
    src_pos: Optional[SourcePos] = field(default=None, compare=False, repr=False)


@dataclass
class Responsibility:
    kind: ResponsibilityKind
    as_milestone: str
    id: NodeId = field(default_factory=new_node_id, compare=False)
    src_pos: Optional[SourcePos] = field(default=None, compare=False, repr=False)


@dataclass
class Scope:
    name: str
    layer_name: str
    description: str = ""
    responsibilities: list[Responsibility] = field(default_factory=list)
    id: NodeId = field(default_factory=new_node_id, compare=False)
    src_pos: Optional[SourcePos] = field(default=None, compare=False, repr=False)


Node = Union[Layer, Milestone, ResultArtifact, Scope, Responsibility]


@dataclass
class ProcessModel:
    """One parsed or built document: header plus ordered declaration lists.

    The registry maps every node id in the document to its node, exactly
    once.  Document order of the lists is significant and preserved by the
    printer.  Equality is structural (ids and source positions ignored,
    registry excluded), so a re-parsed document compares equal to the
    original even though every node got a fresh id.
    """

    header: ProcessHeader
    layers: list[Layer] = field(default_factory=list)
    milestones: list[Milestone] = field(default_factory=list)
    scopes: list[Scope] = field(default_factory=list)
    registry: dict[NodeId, Node] = field(default_factory=dict, compare=False, repr=False)

    # -- queries ------------------------------------------------------------

    def lookup(self, node_id: NodeId) -> Optional[Node]:
        """Return the node for an id, or None if it is not (or no longer) present."""
        return self.registry.get(node_id)

    def milestones_by_name(self, name: str) -> list[Milestone]:
        """All milestones with exactly this name, in document order."""
        return [m for m in self.milestones if m.name == name]

    def layers_by_name(self, name: str) -> list[Layer]:
        return [l for l in self.layers if l.name == name]

    def find_scope(self, layer_name: str, name: str) -> Optional[Scope]:
        for scope in self.scopes:
            if scope.layer_name == layer_name and scope.name == name:
                return scope
        return None

    def iter_nodes(self) -> Iterator[Node]:
        """Every node in the document, depth-first in document order."""
        for layer in self.layers:
            yield layer
        for milestone in self.milestones:
            yield milestone
            yield from milestone.results
        for scope in self.scopes:
            yield scope
            yield from scope.responsibilities

    # -- registry maintenance (command engine + constructor plumbing) -------

    def register(self, node: Node) -> None:
        """Add one node (not its children) to the registry."""
        if node.id in self.registry:
            raise ValueError(f"node id {node.id} already registered")
        self.registry[node.id] = node

    def unregister(self, node: Node) -> None:
        """Drop one node (not its children) from the registry."""
        self.registry.pop(node.id, None)

    def rebuild_registry(self) -> None:
        self.registry.clear()
        for node in self.iter_nodes():
            self.register(node)


def build_model(
    header: ProcessHeader,
    layers: Optional[list[Layer]] = None,
    milestones: Optional[list[Milestone]] = None,
    scopes: Optional[list[Scope]] = None,
) -> ProcessModel:
    """Assemble a model and populate its registry.

    Total by contract: structural duplicates (e.g. two milestones sharing a
    name) are accepted here and reported later by resolve/validate.
    """
    model = ProcessModel(
        header=header,
        layers=list(layers or []),
        milestones=list(milestones or []),
        scopes=list(scopes or []),
    )
    model.rebuild_registry()
    return model


# ---------------------------------------------------------------------------
# Name resolution
# ---------------------------------------------------------------------------

@dataclass
class ResolvedModel:
    """A model plus the responsibility -> milestone association edges."""

    model: ProcessModel
    edges: dict[NodeId, NodeId]
    reverse_edges: dict[NodeId, list[NodeId]]

    def milestone_of(self, responsibility: Responsibility) -> Milestone:
        node = self.model.lookup(self.edges[responsibility.id])
        assert isinstance(node, Milestone)
        return node

    def responsibilities_of(self, milestone: Milestone) -> list[Responsibility]:
        out = []
        for rid in self.reverse_edges.get(milestone.id, []):
            node = self.model.lookup(rid)
            assert isinstance(node, Responsibility)
            out.append(node)
        return out


def resolve(model: ProcessModel) -> tuple[Optional[ResolvedModel], list[Diagnostic]]:
    """Bind every responsibility to the unique milestone named by as_milestone.

    Returns (resolved, []) on success, (None, diagnostics) when milestone
    names are ambiguous or a reference dangles.  All failures are reported,
    not just the first.
    """
    diagnostics: list[Diagnostic] = []

    by_name: dict[str, list[Milestone]] = {}
    for milestone in model.milestones:
        by_name.setdefault(milestone.name, []).append(milestone)
    for name, group in by_name.items():
        for dup in group[1:]:
            line, col = dup.src_pos or (None, None)
            diagnostics.append(Diagnostic(
                Severity.ERROR, DUP_MILESTONE,
                f"duplicate milestone name {name!r}",
                line=line, column=col, node_id=dup.id,
            ))

    edges: dict[NodeId, NodeId] = {}
    reverse_edges: dict[NodeId, list[NodeId]] = {m.id: [] for m in model.milestones}
    for scope in model.scopes:
        for resp in scope.responsibilities:
            group = by_name.get(resp.as_milestone)
            if not group:
                line, col = resp.src_pos or (None, None)
                diagnostics.append(Diagnostic(
                    Severity.ERROR, DANGLING_REF,
                    f"responsibility in scope {scope.name!r} references "
                    f"unknown milestone {resp.as_milestone!r}",
                    line=line, column=col, node_id=resp.id,
                ))
            elif len(group) == 1:
                target = group[0]
                edges[resp.id] = target.id
                reverse_edges[target.id].append(resp.id)

    if diagnostics:
        return None, diagnostics
    return ResolvedModel(model=model, edges=edges, reverse_edges=reverse_edges), []
