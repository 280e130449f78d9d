"""Generators and independent oracles shared by the test suite.

The oracles here deliberately re-derive expected results through a
different code path than the library (naive nested loops, name matching
instead of resolved edges) so that agreement is meaningful.
"""

from __future__ import annotations

import os
import random
import signal
import socket
import string
import subprocess
import sys
import time
from collections import Counter
from datetime import date, timedelta
from pathlib import Path

from procplan.model import (
    Layer,
    Milestone,
    ProcessHeader,
    ProcessModel,
    ResolvedModel,
    Responsibility,
    ResponsibilityKind,
    ResultArtifact,
    Scope,
    TimelineSpec,
    build_model,
)
from procplan import commands as eng
from procplan.syntax import TokenKind, tokenize

FIXTURES = Path(__file__).parent / "fixtures"

KINDS = list(ResponsibilityKind)

# printable-ish description alphabet stressing escapes, quoting and unicode
_DESC_ALPHABET = string.ascii_letters + string.digits + ' .,;:!?\'"\\/()-_\n\täöüß€𝛂'


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def random_ident(rng: random.Random, prefix: str, i: int) -> str:
    # the "_" separator keeps names collision-free across indexes (1_2x vs 12_x)
    tail = "".join(rng.choice(string.ascii_lowercase + string.digits + "_")
                   for _ in range(rng.randint(0, 6)))
    return f"{prefix}{i}_{tail}"


def random_description(rng: random.Random, max_len: int = 24) -> str:
    return "".join(rng.choice(_DESC_ALPHABET) for _ in range(rng.randint(0, max_len)))


def random_model(
    rng: random.Random,
    max_layers: int = 3,
    max_milestones: int = 50,
    max_scopes: int = 10,
    semantically_valid: bool = True,
) -> ProcessModel:
    """A structurally well-formed, resolvable model.

    With semantically_valid=True the model passes every validator rule;
    otherwise rule violations (bad spans, bounds, duplicate declarations,
    unknown layers, missing responsible scopes) are injected at random
    while resolution is kept intact.
    """
    if rng.random() < 0.7:
        bound = rng.randint(1, 60)
        timeline = TimelineSpec.weeks(bound)
    else:
        start = date(2020, 1, 1) + timedelta(days=rng.randint(0, 2000))
        bound = rng.randint(1, 400)
        timeline = TimelineSpec.calendar(start, start + timedelta(days=bound))
    header = ProcessHeader(
        name=random_description(rng, 12) or "plan",
        version=f"{rng.randint(0, 9)}.{rng.randint(0, 9)}",
        timeline=timeline,
    )

    layers = [
        Layer(name=random_ident(rng, "layer", i), description=random_description(rng))
        for i in range(rng.randint(0, max_layers))
    ]

    milestones = []
    for i in range(rng.randint(0, max_milestones)):
        span = None
        if rng.random() < 0.4:
            lo = rng.randint(0, max(0, bound - 1))
            hi = rng.randint(lo + 1, bound)
            span = (lo, hi)
        results = [
            ResultArtifact(name=random_ident(rng, "art", j),
                           description=random_description(rng))
            for j in range(rng.randint(0, 3))
        ]
        milestones.append(Milestone(
            name=random_ident(rng, "ms", i),
            position=rng.randint(0, bound),
            span=span,
            results=results,
            description=random_description(rng),
        ))

    scopes = []
    if layers and milestones:
        for i in range(rng.randint(0, max_scopes)):
            targets = rng.sample(milestones, k=rng.randint(0, min(6, len(milestones))))
            scopes.append(Scope(
                name=random_ident(rng, "sc", i),
                layer_name=rng.choice(layers).name,
                description=random_description(rng),
                responsibilities=[
                    Responsibility(kind=rng.choice(KINDS), as_milestone=m.name)
                    for m in targets
                ],
            ))

    if semantically_valid:
        # every milestone needs a responsible scope; funnel them into one
        if milestones:
            if not layers:
                layers.append(Layer(name="layer_root", description=""))
            covered = {
                r.as_milestone
                for s in scopes for r in s.responsibilities
                if r.kind is ResponsibilityKind.RESPONSIBLE
            }
            missing = [m for m in milestones if m.name not in covered]
            if missing:
                scopes.append(Scope(
                    name="sc_owners",
                    layer_name=layers[0].name,
                    description="catch-all responsible scope",
                    responsibilities=[
                        Responsibility(kind=ResponsibilityKind.RESPONSIBLE,
                                       as_milestone=m.name)
                        for m in missing
                    ],
                ))
    else:
        _inject_violations(rng, bound, layers, milestones, scopes)

    return build_model(header, layers, milestones, scopes)


def _inject_violations(rng, bound, layers, milestones, scopes) -> None:
    if layers and rng.random() < 0.3:
        layers.append(Layer(name=rng.choice(layers).name, description="dup"))
    if milestones and rng.random() < 0.3:
        victim = rng.choice(milestones)
        victim.span = (bound + 1, bound + 3) if rng.random() < 0.5 else (5, 5)
    if milestones and rng.random() < 0.3:
        rng.choice(milestones).position = bound + rng.randint(1, 9)
    if milestones and rng.random() < 0.2:
        victim = rng.choice(milestones)
        victim.results = [ResultArtifact(name="dup_art"), ResultArtifact(name="dup_art")]
    if scopes and rng.random() < 0.3:
        original = rng.choice(scopes)
        scopes.append(Scope(name=original.name, layer_name=original.layer_name,
                            description="dup scope"))
    if scopes and rng.random() < 0.3:
        rng.choice(scopes).layer_name = "no_such_layer"
    if scopes and milestones and rng.random() < 0.3:
        scope = rng.choice(scopes)
        target = rng.choice(milestones).name
        scope.responsibilities = [r for r in scope.responsibilities
                                  if r.as_milestone != target]
        scope.responsibilities.extend([
            Responsibility(kind=rng.choice(KINDS), as_milestone=target),
            Responsibility(kind=rng.choice(KINDS), as_milestone=target),
        ])


# ---------------------------------------------------------------------------
# Random valid commands for undo/redo trials
# ---------------------------------------------------------------------------

_cmd_seq = 0


def _fresh_name(prefix: str) -> str:
    global _cmd_seq
    _cmd_seq += 1
    return f"{prefix}_new{_cmd_seq}"


def random_valid_command(rng: random.Random, model: ProcessModel) -> eng.Command:
    """A command that is guaranteed applicable to the current model state."""
    bound = model.header.timeline.position_bound()
    options = []

    options.append(lambda: eng.AddMilestone(
        name=_fresh_name("ms"), position=rng.randint(0, bound),
        description=random_description(rng),
        index=rng.randint(0, len(model.milestones)),
    ))
    options.append(lambda: eng.AddLayer(
        name=_fresh_name("layer"), description=random_description(rng),
        index=rng.randint(0, len(model.layers)),
    ))

    if model.milestones:
        pick = lambda: rng.choice(model.milestones)
        options.append(lambda: eng.MoveMilestone(pick().name, rng.randint(0, bound)))
        options.append(lambda: eng.RenameMilestone(pick().name, _fresh_name("ms")))
        options.append(lambda: eng.SetDescription(
            eng.Target(kind="milestone", milestone=pick().name),
            random_description(rng),
        ))
        options.append(lambda: eng.RemoveMilestone(pick().name, cascade=True))

        def set_span():
            if rng.random() < 0.3:
                return eng.SetSpan(pick().name, None)
            lo = rng.randint(0, max(0, bound - 1))
            return eng.SetSpan(pick().name, (lo, rng.randint(lo + 1, bound)))
        options.append(set_span)
        options.append(lambda: eng.AddResult(
            milestone=pick().name, name=_fresh_name("art"),
            description=random_description(rng),
        ))
        with_results = [m for m in model.milestones if m.results]
        if with_results:
            def remove_result():
                m = rng.choice(with_results)
                return eng.RemoveResult(m.name, rng.choice(m.results).name)
            options.append(remove_result)

    unreferenced = [l for l in model.layers
                    if not any(s.layer_name == l.name for s in model.scopes)]
    if unreferenced:
        options.append(lambda: eng.RemoveLayer(rng.choice(unreferenced).name))

    if model.layers:
        options.append(lambda: eng.AddScope(
            layer=rng.choice(model.layers).name, name=_fresh_name("sc"),
            description=random_description(rng),
            index=rng.randint(0, len(model.scopes)),
        ))
    if model.scopes:
        def remove_scope():
            s = rng.choice(model.scopes)
            return eng.RemoveScope(s.layer_name, s.name)
        options.append(remove_scope)
        if model.milestones:
            def add_resp():
                s = rng.choice(model.scopes)
                taken = {r.as_milestone for r in s.responsibilities}
                free = [m for m in model.milestones if m.name not in taken]
                if not free:
                    return None
                return eng.AddResponsibility(
                    layer=s.layer_name, scope=s.name, kind=rng.choice(KINDS),
                    milestone=rng.choice(free).name,
                    index=rng.randint(0, len(s.responsibilities)),
                )
            options.append(add_resp)
        with_resp = [s for s in model.scopes if s.responsibilities]
        if with_resp:
            def remove_resp():
                s = rng.choice(with_resp)
                return eng.RemoveResponsibility(
                    s.layer_name, s.name, rng.choice(s.responsibilities).as_milestone)
            options.append(remove_resp)

            def set_kind():
                s = rng.choice(with_resp)
                r = rng.choice(s.responsibilities)
                return eng.SetResponsibilityKind(
                    s.layer_name, s.name, r.as_milestone, rng.choice(KINDS))
            options.append(set_kind)

    while True:
        cmd = rng.choice(options)()
        if cmd is not None:
            return cmd


# ---------------------------------------------------------------------------
# Naive validator oracle (independent re-implementation of every rule)
# ---------------------------------------------------------------------------

def naive_validate(resolved: ResolvedModel) -> Counter:
    """Violations as a multiset of (severity, code, node id value) facts,
    computed with plain nested loops and name matching only."""
    model = resolved.model
    bound = model.header.timeline.position_bound()
    facts: list[tuple[str, str, int]] = []

    for i, layer in enumerate(model.layers):
        if any(other.name == layer.name for other in model.layers[:i]):
            facts.append(("error", "DUP_LAYER", layer.id.value))

    layer_names = [l.name for l in model.layers]
    for milestone in model.milestones:
        if milestone.span is not None:
            if milestone.span[0] >= milestone.span[1]:
                facts.append(("error", "TIME_ORDER", milestone.id.value))
            for value in milestone.span:
                if value < 0 or value > bound:
                    facts.append(("error", "POS_BOUNDS", milestone.id.value))
        if milestone.position < 0 or milestone.position > bound:
            facts.append(("error", "POS_BOUNDS", milestone.id.value))
        for j, artifact in enumerate(milestone.results):
            if any(a.name == artifact.name for a in milestone.results[:j]):
                facts.append(("error", "DUP_RESULT", artifact.id.value))

    for i, scope in enumerate(model.scopes):
        if any(s.name == scope.name and s.layer_name == scope.layer_name
               for s in model.scopes[:i]):
            facts.append(("error", "DUP_SCOPE", scope.id.value))
        if scope.layer_name not in layer_names:
            facts.append(("error", "UNKNOWN_LAYER", scope.id.value))
        for j, resp in enumerate(scope.responsibilities):
            if any(r.as_milestone == resp.as_milestone
                   for r in scope.responsibilities[:j]):
                facts.append(("error", "DUP_RESP", resp.id.value))

    for milestone in model.milestones:
        responsible = False
        for scope in model.scopes:
            for resp in scope.responsibilities:
                if (resp.as_milestone == milestone.name
                        and resp.kind is ResponsibilityKind.RESPONSIBLE):
                    responsible = True
        if not responsible:
            facts.append(("warning", "NO_RESPONSIBLE", milestone.id.value))

    return Counter(facts)


def diagnostics_as_facts(diagnostics) -> Counter:
    return Counter((d.severity.value, d.code, d.node_id.value) for d in diagnostics)


# ---------------------------------------------------------------------------
# Naive view oracles
# ---------------------------------------------------------------------------

def _doc_order(model: ProcessModel) -> dict[str, int]:
    return {m.name: i for i, m in enumerate(model.milestones)}


def _sorted_names(model: ProcessModel, names) -> list[str]:
    by_name = {m.name: m for m in model.milestones}
    order = _doc_order(model)
    return sorted(names, key=lambda n: (by_name[n].position, order[n]))


def naive_scope_plan(model: ProcessModel, layer: str, scope: str) -> list[tuple[str, str]]:
    """(milestone name, kind keyword) pairs, ordered by position/doc order."""
    milestone_names = {m.name for m in model.milestones}
    collected: dict[str, str] = {}
    for s in model.scopes:
        if s.layer_name == layer and s.name == scope:
            for r in s.responsibilities:
                if r.as_milestone in milestone_names and r.as_milestone not in collected:
                    collected[r.as_milestone] = r.kind.value
    return [(n, collected[n]) for n in _sorted_names(model, collected)]


def naive_layer_involvement(model: ProcessModel, layer: str) -> list[tuple[str, str]]:
    strength = {"resp": 3, "cont": 2, "noti": 1}
    milestone_names = {m.name for m in model.milestones}
    best: dict[str, str] = {}
    for s in model.scopes:
        if s.layer_name != layer:
            continue
        for r in s.responsibilities:
            if r.as_milestone not in milestone_names:
                continue
            kw = r.kind.value
            if r.as_milestone not in best or strength[kw] > strength[best[r.as_milestone]]:
                best[r.as_milestone] = kw
    return [(n, best[n]) for n in _sorted_names(model, best)]


def naive_milestone_io(model: ProcessModel, milestone: str) -> tuple[list[str], list[str]]:
    """(input artifact-owning milestone names sorted, output artifact names)."""
    subject = next(m for m in model.milestones if m.name == milestone)
    scopes_of: dict[str, set[str]] = {m.name: set() for m in model.milestones}
    for s in model.scopes:
        for r in s.responsibilities:
            if r.as_milestone in scopes_of:
                scopes_of[r.as_milestone].add(f"{s.layer_name}/{s.name}")
    inputs = [
        m.name for m in model.milestones
        if m.position < subject.position
        and scopes_of[m.name] & scopes_of[subject.name]
    ]
    return _sorted_names(model, inputs), [a.name for a in subject.results]


# ---------------------------------------------------------------------------
# Single-token corruption
# ---------------------------------------------------------------------------

_REPLACEMENT = {
    TokenKind.KEYWORD: "199",
    TokenKind.IDENT: '"zz"',
    TokenKind.NUMBER: "zz",
    TokenKind.STRING: "7",
    TokenKind.DATE: '"zz"',
}


def corrupt_one_token(text: str, rng: random.Random) -> tuple[str, int]:
    """Replace one random token with a token of an incompatible kind.

    Returns (corrupted text, line of the corrupted token).
    """
    tokens, diags = tokenize(text)
    assert not diags
    candidates = [t for t in tokens if t.kind is not TokenKind.EOF]
    victim = rng.choice(candidates)
    replacement = _REPLACEMENT[victim.kind]
    return text[:victim.start] + replacement + text[victim.end:], victim.line


# ---------------------------------------------------------------------------
# Real server processes (serve lifecycle and HTTP integration tests)
# ---------------------------------------------------------------------------

def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def start_server(data_dir: Path, port: int, users: str = "alice:wonder") -> subprocess.Popen:
    import httpx

    env = dict(os.environ, PROCPLAN_USERS=users, PYTHONUNBUFFERED="1")
    proc = subprocess.Popen(
        [sys.executable, "-m", "procplan.cli", "serve",
         "--addr", f"127.0.0.1:{port}", "--data-dir", str(data_dir)],
        env=env, stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
    )
    deadline = time.time() + 15
    while time.time() < deadline:
        if proc.poll() is not None:
            raise RuntimeError(f"server died: {proc.stdout.read().decode()}")
        try:
            httpx.get(f"http://127.0.0.1:{port}/api/files", timeout=1)
            return proc
        except httpx.TransportError:
            time.sleep(0.05)
    proc.kill()
    raise RuntimeError("server did not come up")


def stop_server(proc: subprocess.Popen) -> None:
    proc.send_signal(signal.SIGINT)
    try:
        proc.wait(timeout=10)
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.wait()
