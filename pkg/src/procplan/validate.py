"""Semantic checks over a resolved model.

validate() returns every violation it can find, never stopping at the
first, in a deterministic order (document order of the offending nodes).
Violations are data, not faults.  validate_text() composes the whole
pipeline: lex/parse, resolve, validate, with the phases short-circuiting
so that semantic checks never run on input that did not parse or resolve.

Error codes: TIME_ORDER, POS_BOUNDS, DUP_SCOPE, DUP_RESP, DUP_LAYER,
DUP_RESULT, UNKNOWN_LAYER.  Warning codes: NO_RESPONSIBLE.
"""

from __future__ import annotations

from .model import (
    DUP_LAYER,
    DUP_RESP,
    DUP_RESULT,
    DUP_SCOPE,
    Diagnostic,
    NO_RESPONSIBLE,
    POS_BOUNDS,
    ResolvedModel,
    ResponsibilityKind,
    Severity,
    TIME_ORDER,
    UNKNOWN_LAYER,
    resolve,
)
from .syntax import parse


def validate(resolved: ResolvedModel) -> list[Diagnostic]:
    """All semantic violations in the document; empty list means valid."""
    model = resolved.model
    diagnostics: list[Diagnostic] = []

    def report(severity: Severity, code: str, message: str, node) -> None:
        line, col = node.src_pos or (None, None)
        diagnostics.append(Diagnostic(
            severity, code, message, line=line, column=col, node_id=node.id,
        ))

    bound = model.header.timeline.position_bound()

    seen_layers: set[str] = set()
    for layer in model.layers:
        if layer.name in seen_layers:
            report(Severity.ERROR, DUP_LAYER,
                   f"duplicate layer name {layer.name!r}", layer)
        seen_layers.add(layer.name)

    for milestone in model.milestones:
        if milestone.span is not None:
            span_start, span_end = milestone.span
            if not span_start < span_end:
                report(Severity.ERROR, TIME_ORDER,
                       f"milestone {milestone.name!r} span start {span_start} "
                       f"is not before its end {span_end}", milestone)
            for label, value in (("span start", span_start), ("span end", span_end)):
                if not 0 <= value <= bound:
                    report(Severity.ERROR, POS_BOUNDS,
                           f"milestone {milestone.name!r} {label} {value} is outside "
                           f"the timeline (0..{bound})", milestone)
        if not 0 <= milestone.position <= bound:
            report(Severity.ERROR, POS_BOUNDS,
                   f"milestone {milestone.name!r} position {milestone.position} "
                   f"is outside the timeline (0..{bound})", milestone)
        seen_artifacts: set[str] = set()
        for artifact in milestone.results:
            if artifact.name in seen_artifacts:
                report(Severity.ERROR, DUP_RESULT,
                       f"milestone {milestone.name!r} has two result artifacts "
                       f"named {artifact.name!r}", artifact)
            seen_artifacts.add(artifact.name)

    seen_scopes: set[tuple[str, str]] = set()
    for scope in model.scopes:
        key = (scope.layer_name, scope.name)
        if key in seen_scopes:
            report(Severity.ERROR, DUP_SCOPE,
                   f"duplicate scope {scope.name!r} in layer {scope.layer_name!r}", scope)
        seen_scopes.add(key)
        if scope.layer_name not in seen_layers:
            report(Severity.ERROR, UNKNOWN_LAYER,
                   f"scope {scope.name!r} references undeclared layer "
                   f"{scope.layer_name!r}", scope)
        seen_targets: set[str] = set()
        for resp in scope.responsibilities:
            if resp.as_milestone in seen_targets:
                report(Severity.ERROR, DUP_RESP,
                       f"scope {scope.name!r} has two responsibilities for "
                       f"milestone {resp.as_milestone!r}", resp)
            seen_targets.add(resp.as_milestone)

    for milestone in model.milestones:
        kinds = {r.kind for r in resolved.responsibilities_of(milestone)}
        if ResponsibilityKind.RESPONSIBLE not in kinds:
            report(Severity.WARNING, NO_RESPONSIBLE,
                   f"no scope is responsible for milestone {milestone.name!r}", milestone)

    # Document-position order for parsed models; the sort is stable, so
    # diagnostics on position-less (programmatic) nodes keep emission order.
    diagnostics.sort(key=lambda d: (d.line or 0, d.column or 0))
    return diagnostics


def validate_text(text: str) -> list[Diagnostic]:
    """Full pipeline: syntax, resolution, then semantic diagnostics.

    Phases short-circuit: resolution runs only on a parsed model, semantic
    checks only on a resolved one.
    """
    result = parse(text)
    if result.model is None:
        return result.diagnostics
    resolved, resolution_diags = resolve(result.model)
    if resolved is None:
        return result.diagnostics + resolution_diags
    return result.diagnostics + validate(resolved)
