"""Toolchain and collaborative editing service for milestone-plan documents.

A small textual language describes a process plan: a header with a
timeline, organizational layers, milestones with results, and scopes whose
responsibilities reference milestones by name.  This package parses,
validates, formats and projects such documents, applies reversible edit
commands with undo/redo, and serves them over an HTTP JSON API.
"""

from .model import (
    Diagnostic,
    Layer,
    Milestone,
    NodeId,
    ProcessHeader,
    ProcessModel,
    ResolvedModel,
    Responsibility,
    ResponsibilityKind,
    ResultArtifact,
    Scope,
    Severity,
    TimelineKind,
    TimelineSpec,
    build_model,
    has_errors,
    new_node_id,
    resolve,
)
from .syntax import ParseResult, Token, TokenKind, canonicalize, parse, print_model, tokenize
from .validate import validate, validate_text
from .views import (
    UnknownViewSubject,
    ViewEntry,
    ViewKind,
    ViewModel,
    layer_involvement,
    milestone_io,
    milestone_list,
    scope_plan,
)
from .commands import (
    BatchError,
    Command,
    CommandError,
    History,
    command_from_json,
    command_to_json,
)
from .store import DocumentStore, ServiceError, Session

__version__ = "0.1.0"

__all__ = [
    "BatchError",
    "Command",
    "CommandError",
    "Diagnostic",
    "DocumentStore",
    "History",
    "Layer",
    "Milestone",
    "NodeId",
    "ParseResult",
    "ProcessHeader",
    "ProcessModel",
    "ResolvedModel",
    "Responsibility",
    "ResponsibilityKind",
    "ResultArtifact",
    "Scope",
    "ServiceError",
    "Session",
    "Severity",
    "TimelineKind",
    "TimelineSpec",
    "Token",
    "TokenKind",
    "UnknownViewSubject",
    "ViewEntry",
    "ViewKind",
    "ViewModel",
    "build_model",
    "canonicalize",
    "command_from_json",
    "command_to_json",
    "has_errors",
    "layer_involvement",
    "milestone_io",
    "milestone_list",
    "new_node_id",
    "parse",
    "print_model",
    "resolve",
    "scope_plan",
    "tokenize",
    "validate",
    "validate_text",
]
