"""Command-line front end: check, fmt, view, serve.

Exit codes are a stable contract: 0 clean, 1 warnings only, 2 errors,
3 I/O or startup failure, 4 unknown view subject.  Diagnostics go to
standard error, one per line, as ``path:line:col: severity CODE message``.

Configuration for `serve` comes from flags or environment variables:
PROCPLAN_ADDR (host:port), PROCPLAN_DATA_DIR, PROCPLAN_SESSION_TTL
(seconds) and PROCPLAN_USERS ("alice:pw,bob:pw" bootstrap accounts).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional

from .model import has_errors, resolve
from .store import DEFAULT_SESSION_TTL, DocumentStore
from .syntax import parse, print_model
from .validate import validate_text
from .views import UnknownViewSubject, ViewModel
from . import views

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_ERRORS = 2
EXIT_IO = 3
EXIT_BAD_SUBJECT = 4


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as handle:
        return handle.read()


def _print_diagnostics(path: str, diagnostics) -> None:
    for diagnostic in diagnostics:
        print(diagnostic.render(path), file=sys.stderr)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        text = _read_file(args.path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    diagnostics = validate_text(text)
    _print_diagnostics(args.path, diagnostics)
    if has_errors(diagnostics):
        return EXIT_ERRORS
    if diagnostics:
        return EXIT_WARNINGS
    return EXIT_OK


def cmd_fmt(args: argparse.Namespace) -> int:
    try:
        text = _read_file(args.path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    result = parse(text)
    if result.model is None:
        _print_diagnostics(args.path, result.diagnostics)
        return EXIT_ERRORS
    canonical = print_model(result.model)
    if args.check:
        if canonical != text:
            print(f"{args.path}: not in canonical form", file=sys.stderr)
            return EXIT_WARNINGS
        return EXIT_OK
    if args.write:
        if canonical != text:
            try:
                directory = os.path.dirname(os.path.abspath(args.path))
                fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                    handle.write(canonical)
                os.replace(tmp, args.path)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_IO
        return EXIT_OK
    sys.stdout.write(canonical)
    return EXIT_OK


def _render_view_text(view: ViewModel) -> str:
    headers = ["name", "position", "span", "access", "role", "description", "results"]
    rows = []
    for entry in view.entries:
        data = entry.to_json()
        rows.append([
            data.get("name", ""),
            str(data.get("position", "")),
            "{}..{}".format(*data["span"]) if data.get("span") else "",
            data.get("access", ""),
            data.get("role", ""),
            data.get("description", ""),
            ", ".join(r["name"] for r in data.get("results", [])),
        ])
    used = [i for i in range(len(headers)) if any(row[i] for row in rows)]
    if not used:
        used = [0, 1]
    widths = [max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
              for i in used]
    lines = ["  ".join(headers[i].ljust(w) for i, w in zip(used, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(row[i].ljust(w) for i, w in zip(used, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_view(args: argparse.Namespace) -> int:
    try:
        text = _read_file(args.path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    diagnostics = validate_text(text)
    if has_errors(diagnostics):
        _print_diagnostics(args.path, diagnostics)
        return EXIT_ERRORS
    model = parse(text).model
    resolved, _ = resolve(model)
    assert resolved is not None
    try:
        if args.kind == "milestone-list":
            view = views.milestone_list(resolved)
        elif args.kind == "scope-plan":
            view = views.scope_plan(resolved, _require(args, "layer"), _require(args, "scope"))
        elif args.kind == "milestone-io":
            view = views.milestone_io(resolved, _require(args, "milestone"))
        elif args.kind == "layer-involvement":
            view = views.layer_involvement(resolved, _require(args, "layer"))
        else:  # pragma: no cover - argparse choices prevent this
            print(f"error: unknown view kind {args.kind}", file=sys.stderr)
            return EXIT_BAD_SUBJECT
    except UnknownViewSubject as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SUBJECT
    if args.format == "json":
        json.dump(view.to_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(_render_view_text(view))
    return EXIT_OK


def _require(args: argparse.Namespace, name: str) -> str:
    value = getattr(args, name, None)
    if not value:
        raise UnknownViewSubject(f"view {args.kind!r} requires --{name}")
    return value


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .webapi import create_app

    addr = args.addr or os.environ.get("PROCPLAN_ADDR", "127.0.0.1:8440")
    data_dir = args.data_dir or os.environ.get("PROCPLAN_DATA_DIR", "")
    if not data_dir:
        print("error: no data directory (use --data-dir or PROCPLAN_DATA_DIR)", file=sys.stderr)
        return EXIT_IO
    ttl = float(os.environ.get("PROCPLAN_SESSION_TTL", DEFAULT_SESSION_TTL))
    host, _, port_text = addr.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        print(f"error: invalid listen address {addr!r}", file=sys.stderr)
        return EXIT_IO

    try:
        store = DocumentStore(Path(data_dir), session_ttl=ttl)
    except OSError as exc:
        print(f"error: cannot open data directory: {exc}", file=sys.stderr)
        return EXIT_IO

    for entry in os.environ.get("PROCPLAN_USERS", "").split(","):
        if entry and ":" in entry:
            username, _, password = entry.partition(":")
            if not store.has_user(username):
                store.create_user(username, password)

    static_dir = os.environ.get("PROCPLAN_STATIC_DIR") or None
    app = create_app(store, static_dir=static_dir)
    config = uvicorn.Config(app, host=host or "127.0.0.1", port=port, log_level="warning")
    server = uvicorn.Server(config)
    try:
        server.run()
    except (SystemExit, OSError) as exc:
        print(f"error: server failed to start: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procplan",
        description="Toolchain and editing service for milestone-plan documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse, resolve and validate a file")
    p_check.add_argument("path")
    p_check.set_defaults(func=cmd_check)

    p_fmt = sub.add_parser("fmt", help="canonically format a file")
    p_fmt.add_argument("path")
    group = p_fmt.add_mutually_exclusive_group()
    group.add_argument("--write", action="store_true", help="rewrite the file in place")
    group.add_argument("--check", action="store_true", help="exit 1 if not canonical")
    p_fmt.set_defaults(func=cmd_fmt)

    p_view = sub.add_parser("view", help="render an organizational view")
    p_view.add_argument("path")
    p_view.add_argument(
        "kind",
        choices=["milestone-list", "scope-plan", "milestone-io", "layer-involvement"],
    )
    p_view.add_argument("--layer")
    p_view.add_argument("--scope")
    p_view.add_argument("--milestone")
    p_view.add_argument("--format", choices=["text", "json"], default="text")
    p_view.set_defaults(func=cmd_view)

    p_serve = sub.add_parser("serve", help="run the document service")
    p_serve.add_argument("--addr", help="host:port to listen on")
    p_serve.add_argument("--data-dir", help="directory for documents and drafts")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
