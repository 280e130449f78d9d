"""Concrete syntax for milestone-plan documents: lexer, parser, printer.

The single source of truth for the file format.  Grammar (LL(1)):

    File     := "process" Header Layer* Milestone* Scope* "end"
    Header   := "name" STRING "version" STRING "timeline" Timeline
    Timeline := "weeks" NUMBER | "calendar" DATE DATE
    Layer    := "layer" IDENT "description" STRING
    Milestone:= "milestone" IDENT "position" NUMBER
                ["span" NUMBER NUMBER]
                ("result" Result*)? "description" STRING
    Result   := "artifact" IDENT "description" STRING
    Scope    := "scope" IDENT "layer" IDENT "description" STRING Resp*
    Resp     := "responsibility" ("resp"|"cont"|"noti") "asmilestone" STRING

Lexical classes: IDENT = letter (letter|digit|_)*; NUMBER = decimal digits;
DATE = YYYY-MM-DD; STRING = double-quoted with \\" and \\\\ escapes (any other
character, including newlines, stands for itself).  Comments run from // to
end of line.  Encoding is UTF-8 with \\n newlines.

print_model emits the canonical form: one field or declaration per line,
2-space indentation, declarations in grammar order.  parse(print_model(m))
is structurally equal to m, and print_model . parse is idempotent
byte-for-byte on canonical text.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Optional

from .model import (
    Diagnostic,
    Layer,
    LEX_CHAR,
    LEX_STRING,
    Milestone,
    PARSE_EOF,
    PARSE_EXPECTED,
    PARSE_VALUE,
    ProcessHeader,
    ProcessModel,
    Responsibility,
    ResponsibilityKind,
    ResultArtifact,
    Scope,
    Severity,
    TimelineKind,
    TimelineSpec,
    build_model,
    has_errors,
)

# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

KEYWORDS = frozenset({
    "process", "end", "name", "version", "timeline", "weeks", "calendar",
    "layer", "milestone", "position", "span", "result", "artifact",
    "description", "scope", "responsibility", "resp", "cont", "noti",
    "asmilestone",
})


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    STRING = "string"
    NUMBER = "number"
    DATE = "date"
    EOF = "end of file"


@dataclass(frozen=True)
class Token:
    """One lexeme; for strings, text holds the unescaped value."""

    kind: TokenKind
    text: str
    line: int
    column: int
    # absolute offsets into the source, [start, end); handy for tooling
    start: int = field(default=0, compare=False)
    end: int = field(default=0, compare=False)

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of file"
        if self.kind is TokenKind.KEYWORD:
            return f"'{self.text}'"
        return f"{self.kind.value} {self.text!r}"


_TOKEN_RE = re.compile(
    r"""
      (?P<COMMENT>//[^\n]*)
    | (?P<WS>[ \t\r\n]+)
    | (?P<DATE>\d{4}-\d{2}-\d{2}(?![0-9A-Za-z_-]))
    | (?P<NUMBER>\d+)
    | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<STRING>"(?:[^"\\]|\\.)*")
    | (?P<BADSTRING>"(?:[^"\\]|\\.)*\\?\Z)
    | (?P<MISMATCH>.)
    """,
    re.VERBOSE | re.DOTALL,
)

_ESCAPE_RE = re.compile(r"\\(.)", re.DOTALL)


def unescape_string(lexeme: str) -> str:
    """Value of a STRING token (including the quotes)."""
    return _ESCAPE_RE.sub(r"\1", lexeme[1:-1])


def escape_string(value: str) -> str:
    """Quoted source form of a string value."""
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    """Split source text into positioned tokens.

    Comments and whitespace are discarded.  Bad characters and unterminated
    strings are reported as diagnostics and skipped; the returned stream
    always ends with an EOF token.
    """
    newlines = [i for i, ch in enumerate(text) if ch == "\n"]

    def position(offset: int) -> tuple[int, int]:
        line = bisect_right(newlines, offset - 1) + 1
        col = offset - (newlines[line - 2] + 1 if line > 1 else 0) + 1
        return line, col

    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind in ("WS", "COMMENT"):
            continue
        line, col = position(m.start())
        lexeme = m.group()
        if kind == "MISMATCH":
            diagnostics.append(Diagnostic(
                Severity.ERROR, LEX_CHAR,
                f"character {lexeme!r} is not part of the language",
                line=line, column=col,
            ))
            continue
        if kind == "BADSTRING":
            diagnostics.append(Diagnostic(
                Severity.ERROR, LEX_STRING,
                "unterminated string literal",
                line=line, column=col,
            ))
            continue
        if kind == "IDENT" and lexeme in KEYWORDS:
            token_kind = TokenKind.KEYWORD
        else:
            token_kind = TokenKind[kind]
        token_text = unescape_string(lexeme) if token_kind is TokenKind.STRING else lexeme
        tokens.append(Token(token_kind, token_text, line, col, m.start(), m.end()))

    eof_line, eof_col = position(len(text))
    tokens.append(Token(TokenKind.EOF, "", eof_line, eof_col, len(text), len(text)))
    return tokens, diagnostics


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

@dataclass
class ParseResult:
    """Model plus diagnostics; the model is present iff no error occurred."""

    model: Optional[ProcessModel]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.model is not None


class _Recover(Exception):
    """Internal: unwind to the nearest synchronization point."""


# Keywords that start a top-level declaration; panic-mode recovery skips
# ahead to one of these (or to "end"/EOF).
_SYNC_KEYWORDS = frozenset({"layer", "milestone", "scope", "end"})


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics

    # -- token plumbing ------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        tok = self.current
        return tok.kind is TokenKind.KEYWORD and tok.text in words

    def error(self, message: str, token: Optional[Token] = None, code: str = PARSE_EXPECTED) -> None:
        tok = token or self.current
        if tok.kind is TokenKind.EOF and code == PARSE_EXPECTED:
            code = PARSE_EOF
        self.diagnostics.append(Diagnostic(
            Severity.ERROR, code, message, line=tok.line, column=tok.column,
        ))

    def expect_keyword(self, word: str) -> Token:
        if self.at_keyword(word):
            return self.advance()
        self.error(f"expected '{word}', found {self.current.describe()}")
        raise _Recover

    def expect(self, kind: TokenKind, what: str) -> Token:
        if self.current.kind is kind:
            return self.advance()
        self.error(f"expected {what}, found {self.current.describe()}")
        raise _Recover

    def synchronize(self) -> None:
        """Skip ahead to the next top-level declaration keyword, 'end', or EOF."""
        while self.current.kind is not TokenKind.EOF:
            if self.current.kind is TokenKind.KEYWORD and self.current.text in _SYNC_KEYWORDS:
                return
            self.advance()

    # -- grammar -------------------------------------------------------------

    def parse_file(self) -> Optional[ProcessModel]:
        layers: list[Layer] = []
        milestones: list[Milestone] = []
        scopes: list[Scope] = []
        header: Optional[ProcessHeader] = None

        try:
            self.expect_keyword("process")
            header = self.parse_header()
        except _Recover:
            self.synchronize()

        phase = 0  # 0: layers, 1: milestones, 2: scopes
        while True:
            tok = self.current
            if tok.kind is TokenKind.EOF:
                self.error("premature end of input, expected 'end'", code=PARSE_EOF)
                break
            if self.at_keyword("end"):
                self.advance()
                if self.current.kind is not TokenKind.EOF:
                    self.error(f"expected end of file after 'end', found {self.current.describe()}")
                break

            if self.at_keyword("layer"):
                if phase > 0:
                    self.error("layer declarations must precede milestones and scopes")
                decl = self.attempt(self.parse_layer)
                if decl is not None and phase == 0:
                    layers.append(decl)
            elif self.at_keyword("milestone"):
                if phase > 1:
                    self.error("milestone declarations must precede scopes")
                phase = max(phase, 1)
                decl = self.attempt(self.parse_milestone)
                if decl is not None:
                    milestones.append(decl)
            elif self.at_keyword("scope"):
                phase = 2
                decl = self.attempt(self.parse_scope)
                if decl is not None:
                    scopes.append(decl)
            else:
                self.error(
                    f"expected 'layer', 'milestone', 'scope' or 'end', found {tok.describe()}"
                )
                self.advance()
                self.synchronize()

        if has_errors(self.diagnostics) or header is None:
            return None
        return build_model(header, layers, milestones, scopes)

    def attempt(self, production) -> object:
        try:
            return production()
        except _Recover:
            self.synchronize()
            return None

    def parse_header(self) -> ProcessHeader:
        self.expect_keyword("name")
        name_tok = self.expect(TokenKind.STRING, "process name string")
        name = name_tok.text
        if not name:
            self.error("process name must be non-empty", token=name_tok, code=PARSE_VALUE)
            raise _Recover
        self.expect_keyword("version")
        version = self.expect(TokenKind.STRING, "version string").text
        self.expect_keyword("timeline")
        timeline = self.parse_timeline()
        return ProcessHeader(name=name, version=version, timeline=timeline)

    def parse_timeline(self) -> TimelineSpec:
        if self.at_keyword("weeks"):
            self.advance()
            tok = self.expect(TokenKind.NUMBER, "week count")
            length = int(tok.text)
            if length < 1:
                self.error("timeline length must be at least 1 week", token=tok, code=PARSE_VALUE)
                raise _Recover
            return TimelineSpec.weeks(length)
        if self.at_keyword("calendar"):
            self.advance()
            start = self.parse_date()
            end = self.parse_date()
            if not start < end:
                self.error(
                    "calendar start date must be before end date",
                    token=self.tokens[self.pos - 1], code=PARSE_VALUE,
                )
                raise _Recover
            return TimelineSpec.calendar(start, end)
        self.error(f"expected 'weeks' or 'calendar', found {self.current.describe()}")
        raise _Recover

    def parse_date(self) -> date:
        tok = self.expect(TokenKind.DATE, "date (YYYY-MM-DD)")
        year, month, day = (int(part) for part in tok.text.split("-"))
        try:
            return date(year, month, day)
        except ValueError as exc:
            self.error(f"invalid date {tok.text}: {exc}", token=tok, code=PARSE_VALUE)
            raise _Recover from None

    def parse_layer(self) -> Layer:
        kw = self.expect_keyword("layer")
        name = self.expect(TokenKind.IDENT, "layer name").text
        self.expect_keyword("description")
        description = self.expect(TokenKind.STRING, "description string").text
        return Layer(name=name, description=description, src_pos=(kw.line, kw.column))

    def parse_milestone(self) -> Milestone:
        kw = self.expect_keyword("milestone")
        name = self.expect(TokenKind.IDENT, "milestone name").text
        self.expect_keyword("position")
        position = int(self.expect(TokenKind.NUMBER, "position number").text)
        span: Optional[tuple[int, int]] = None
        if self.at_keyword("span"):
            self.advance()
            span_start = int(self.expect(TokenKind.NUMBER, "span start").text)
            span_end = int(self.expect(TokenKind.NUMBER, "span end").text)
            span = (span_start, span_end)
        results: list[ResultArtifact] = []
        if self.at_keyword("result"):
            self.advance()
            while self.at_keyword("artifact"):
                results.append(self.parse_artifact())
        self.expect_keyword("description")
        description = self.expect(TokenKind.STRING, "description string").text
        return Milestone(
            name=name, position=position, span=span, results=results,
            description=description, src_pos=(kw.line, kw.column),
        )

    def parse_artifact(self) -> ResultArtifact:
        kw = self.expect_keyword("artifact")
        name = self.expect(TokenKind.IDENT, "artifact name").text
        self.expect_keyword("description")
        description = self.expect(TokenKind.STRING, "description string").text
        return ResultArtifact(name=name, description=description, src_pos=(kw.line, kw.column))

    def parse_scope(self) -> Scope:
        kw = self.expect_keyword("scope")
        name = self.expect(TokenKind.IDENT, "scope name").text
        self.expect_keyword("layer")
        layer_name = self.expect(TokenKind.IDENT, "layer name").text
        self.expect_keyword("description")
        description = self.expect(TokenKind.STRING, "description string").text
        responsibilities: list[Responsibility] = []
        while self.at_keyword("responsibility"):
            responsibilities.append(self.parse_responsibility())
        return Scope(
            name=name, layer_name=layer_name, description=description,
            responsibilities=responsibilities, src_pos=(kw.line, kw.column),
        )

    def parse_responsibility(self) -> Responsibility:
        kw = self.expect_keyword("responsibility")
        if self.at_keyword("resp", "cont", "noti"):
            kind = ResponsibilityKind.from_keyword(self.advance().text)
        else:
            self.error(f"expected 'resp', 'cont' or 'noti', found {self.current.describe()}")
            raise _Recover
        self.expect_keyword("asmilestone")
        as_milestone = self.expect(TokenKind.STRING, "milestone name string").text
        return Responsibility(kind=kind, as_milestone=as_milestone, src_pos=(kw.line, kw.column))


def parse(text: str) -> ParseResult:
    """Parse source text into a ProcessModel.

    Never raises on bad input: all problems are reported as positioned
    diagnostics, and the parser recovers at declaration boundaries so that
    several independent errors surface in one pass.
    """
    tokens, diagnostics = tokenize(text)
    parser = _Parser(tokens, diagnostics)
    model = parser.parse_file()
    if has_errors(diagnostics):
        model = None
    return ParseResult(model=model, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Canonical printer
# ---------------------------------------------------------------------------

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INDENT = "  "


def _ident(name: str, what: str) -> str:
    if not _IDENT_RE.match(name):
        raise ValueError(f"{what} {name!r} is not a valid identifier")
    return name


def _number(value: int, what: str) -> str:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{what} must be a non-negative integer, got {value!r}")
    return str(value)


def print_model(model: ProcessModel) -> str:
    """Render the unique canonical text of a model.

    Deterministic: fixed keyword order, one field or declaration per line,
    2-space indentation, \\n line endings, trailing newline.  Raises
    ValueError for models that cannot be represented in the format
    (non-identifier names, negative numbers).
    """
    out: list[str] = []

    def emit(depth: int, text: str) -> None:
        out.append(_INDENT * depth + text)

    header = model.header
    emit(0, "process")
    emit(1, f"name {escape_string(header.name)}")
    emit(1, f"version {escape_string(header.version)}")
    timeline = header.timeline
    if timeline.kind is TimelineKind.WEEKS:
        emit(1, f"timeline weeks {_number(timeline.length_weeks, 'week count')}")
    else:
        emit(1, f"timeline calendar {timeline.start_date.isoformat()} {timeline.end_date.isoformat()}")

    for layer in model.layers:
        emit(1, f"layer {_ident(layer.name, 'layer name')}")
        emit(2, f"description {escape_string(layer.description)}")

    for milestone in model.milestones:
        emit(1, f"milestone {_ident(milestone.name, 'milestone name')}")
        emit(2, f"position {_number(milestone.position, 'position')}")
        if milestone.span is not None:
            span_start, span_end = milestone.span
            emit(2, f"span {_number(span_start, 'span start')} {_number(span_end, 'span end')}")
        if milestone.results:
            emit(2, "result")
            for artifact in milestone.results:
                emit(3, f"artifact {_ident(artifact.name, 'artifact name')}")
                emit(4, f"description {escape_string(artifact.description)}")
        emit(2, f"description {escape_string(milestone.description)}")

    for scope in model.scopes:
        emit(1, f"scope {_ident(scope.name, 'scope name')}")
        emit(2, f"layer {_ident(scope.layer_name, 'layer name')}")
        emit(2, f"description {escape_string(scope.description)}")
        for resp in scope.responsibilities:
            emit(2, f"responsibility {resp.kind.value} asmilestone {escape_string(resp.as_milestone)}")

    emit(0, "end")
    return "\n".join(out) + "\n"


def canonicalize(text: str) -> str:
    """print_model(parse(text)); raises ValueError if the text does not parse."""
    result = parse(text)
    if result.model is None:
        raise ValueError("text does not parse cleanly: "
                         + "; ".join(d.render() for d in result.diagnostics))
    return print_model(result.model)
