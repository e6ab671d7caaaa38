"""Live markdown pages: embed evaluated example views into documentation.

A directive is a fenced block whose info string is exactly ``example``::

    ```example
    id: prices.hundredEuros
    view: overview
    ```

Building a page runs each referenced example (and its ancestors only),
renders the requested view and splices it in place of the directive. Broken
embeds leave a visible marker and an issue instead of aborting the build, so
a page that stopped matching the code fails ``check`` while staying readable.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .core import ExampleGraph, is_valid_id
from .errors import MalformedDirective
from .runner import Failed, Passed, RunPolicy, Runner, describe, run_to
from .views import RAW, ViewRegistry, available_views, render, render_to_markdown

_FENCE_OPEN = re.compile(r" {0,3}(`{3,}|~{3,})(.*)\Z")
_DIRECTIVE_LINE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_-]*)\s*:\s*(.*?)\s*\Z")
_VIEW_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")
_KEYS = ("id", "view")
_LINE = re.compile(r"[^\r\n]*(?:\r\n|\r|\n)|[^\r\n]+\Z")


@dataclass(frozen=True)
class EmbedDirective:
    example_id: str
    view_id: str = RAW


@dataclass(frozen=True)
class Prose:
    text: str

    @property
    def source(self) -> str:
        return self.text


@dataclass(frozen=True)
class Embed:
    directive: EmbedDirective
    source_line: int
    source: str


Block = Prose | Embed


@dataclass(frozen=True)
class Document:
    blocks: tuple[Block, ...]

    @property
    def source(self) -> str:
        return "".join(b.source for b in self.blocks)

    @property
    def embeds(self) -> list[Embed]:
        return [b for b in self.blocks if isinstance(b, Embed)]


class IssueKind(str, enum.Enum):
    FAILED = "failed"
    SKIPPED = "skipped"
    MISSING = "missing"
    UNKNOWN_VIEW = "unknown-view"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Issue:
    block_index: int
    kind: IssueKind
    detail: str


def _strip_eol(line: str) -> str:
    return line.rstrip("\r\n")


def _closes(line: str, char: str, length: int) -> bool:
    body = _strip_eol(line)
    stripped = body.lstrip(" ")
    if len(body) - len(stripped) > 3:
        return False
    run = len(stripped) - len(stripped.lstrip(char))
    return run >= length and stripped[run:].strip(" \t") == ""


def _split_lines(text: str) -> list[str]:
    # markdown line endings only; str.splitlines also breaks on \f, \u2028 and friends
    return _LINE.findall(text)


def parse_document(text: str) -> Document:
    lines = _split_lines(text)
    blocks: list[Block] = []
    prose: list[str] = []
    i = 0

    def flush():
        if prose:
            blocks.append(Prose("".join(prose)))
            prose.clear()

    while i < len(lines):
        m = _FENCE_OPEN.match(_strip_eol(lines[i]))
        if not m:
            prose.append(lines[i])
            i += 1
            continue
        fence, info = m.group(1), m.group(2)
        char, length = fence[0], len(fence)
        if char == "`" and "`" in info:
            # not a fence per CommonMark: backtick info strings cannot hold backticks
            prose.append(lines[i])
            i += 1
            continue
        end = i + 1
        while end < len(lines) and not _closes(lines[end], char, length):
            end += 1
        if info.strip(" \t") != "example":
            # ordinary code block, possibly unclosed until end of input
            prose.extend(lines[i:end + 1])
            i = end + 1
            continue
        if end >= len(lines):
            raise MalformedDirective(i + 1, "unclosed example block")
        directive = _parse_directive(lines[i + 1:end], i + 1)
        flush()
        blocks.append(Embed(directive, i + 1, "".join(lines[i:end + 1])))
        i = end + 1
    flush()
    return Document(tuple(blocks))


def _parse_directive(body: list[str], open_line: int) -> EmbedDirective:
    fields: dict[str, str] = {}
    for offset, raw in enumerate(body, start=1):
        lineno = open_line + offset
        line = _strip_eol(raw)
        if not line.strip():
            continue
        m = _DIRECTIVE_LINE.match(line)
        if not m:
            raise MalformedDirective(lineno, f"expected 'key: value', got {line.strip()!r}")
        key, value = m.groups()
        if key not in _KEYS:
            raise MalformedDirective(lineno, f"unknown key {key!r}")
        if key in fields:
            raise MalformedDirective(lineno, f"duplicate key {key!r}")
        if key == "id" and not is_valid_id(value):
            raise MalformedDirective(lineno, f"invalid id {value!r}")
        if key == "view" and not _VIEW_RE.match(value):
            raise MalformedDirective(lineno, f"invalid view {value!r}")
        fields[key] = value
    if "id" not in fields:
        raise MalformedDirective(open_line, "missing id")
    return EmbedDirective(fields["id"], fields.get("view", RAW))


def _blockquote(text: str) -> str:
    return "\n".join(f"> {line}".rstrip() for line in text.splitlines()) + "\n"


def _failure_marker(example_id: str, kind: IssueKind, detail: str) -> str:
    return f"<!-- example: {example_id} status: {kind} -->\n" + _blockquote(detail)


def _render_embed(embed: Embed, g: ExampleGraph, views: ViewRegistry,
                  runner: Runner) -> tuple[str, IssueKind | None, str]:
    d = embed.directive
    if d.example_id not in g.nodes:
        detail = f"example {d.example_id} is not defined"
        return _failure_marker(d.example_id, IssueKind.MISSING, detail), IssueKind.MISSING, detail

    status, value = run_to(g, d.example_id, runner=runner)
    if not isinstance(status, Passed):
        kind = IssueKind.FAILED if isinstance(status, Failed) else IssueKind.SKIPPED
        detail = f"example {d.example_id} {describe(status)}"
        return _failure_marker(d.example_id, kind, detail), kind, detail

    known = available_views(value.type_tag, views)
    if d.view_id not in known:
        detail = (f"example {d.example_id} ({value.type_tag}) has no view {d.view_id!r}; "
                  f"available: {', '.join(known)}")
        kind = IssueKind.UNKNOWN_VIEW
        return _failure_marker(d.example_id, kind, detail), kind, detail
    try:
        body = render_to_markdown(render(value, d.view_id, views))
    except Exception as exc:
        detail = (f"view {d.view_id!r} of example {d.example_id} raised "
                  f"{type(exc).__name__}: {exc}")
        return _failure_marker(d.example_id, IssueKind.FAILED, detail), IssueKind.FAILED, detail
    marker = f"<!-- example: {d.example_id} view: {d.view_id} status: passed -->\n"
    return marker + body + "\n", None, ""


def build_document(doc: Document, g: ExampleGraph, views: ViewRegistry,
                   policy: RunPolicy | None = None) -> tuple[str, list[Issue]]:
    """Render *doc*; returns the output text and the list of broken embeds."""
    runner = Runner(g, policy)
    out: list[str] = []
    issues: list[Issue] = []
    for index, block in enumerate(doc.blocks):
        if isinstance(block, Prose):
            out.append(block.text)
            continue
        text, kind, detail = _render_embed(block, g, views, runner)
        out.append(text)
        if kind is not None:
            issues.append(Issue(index, kind, detail))
    return "".join(out), issues


def check_document(doc: Document, g: ExampleGraph, views: ViewRegistry,
                   policy: RunPolicy | None = None) -> list[Issue]:
    return build_document(doc, g, views, policy)[1]
