"""Moldable views: small named functions turning example values into render trees.

Every value gets a synthesized ``raw`` view listing its structural fields.
Extra views are registered per type tag and rendered to markdown or plain
text with a fixed, golden-file friendly grammar.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType
from typing import Union

from .errors import InvalidViewId, ReservedViewId, UnknownView
from .runner import ExampleValue

RAW = "raw"

_VIEW_RE = re.compile(r"[a-z][a-z0-9_-]*\Z")


@dataclass(frozen=True)
class Text:
    content: str


@dataclass(frozen=True)
class KeyValue:
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((str(k), str(v)) for k, v in self.pairs))


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        columns = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(str(c) for c in r) for r in self.rows)
        for i, r in enumerate(rows):
            if len(r) != len(columns):
                raise ValueError(f"row {i} has {len(r)} cells, expected {len(columns)}")
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class ListNode:
    items: tuple[RenderNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class Composite:
    label: str
    children: tuple[RenderNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


RenderNode = Union[Text, KeyValue, Table, ListNode, Composite]
ViewFn = Callable[[ExampleValue], RenderNode]


def validate_view_id(view_id) -> str:
    if not isinstance(view_id, str) or not _VIEW_RE.match(view_id):
        raise InvalidViewId(f"invalid view id: {view_id!r}")
    return view_id


@dataclass(frozen=True, eq=False)
class ViewRegistry:
    entries: Mapping[tuple[str, str], ViewFn] = MappingProxyType({})

    def __post_init__(self):
        for (_, view_id) in self.entries:
            if view_id == RAW:
                raise ReservedViewId(RAW)
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def register(self, type_tag: str, view_id: str, fn: ViewFn) -> ViewRegistry:
        return register_view(type_tag, view_id, fn, self)

    def merge(self, other: ViewRegistry) -> ViewRegistry:
        return ViewRegistry({**self.entries, **other.entries})

    def __contains__(self, key) -> bool:
        return key in self.entries


def register_view(type_tag: str, view_id: str, fn: ViewFn, reg: ViewRegistry) -> ViewRegistry:
    validate_view_id(view_id)
    if view_id == RAW:
        raise ReservedViewId(RAW)
    if not type_tag:
        raise ValueError("type_tag must be non-empty")
    return ViewRegistry({**reg.entries, (type_tag, view_id): fn})


def available_views(type_tag: str, reg: ViewRegistry) -> list[str]:
    return [RAW] + sorted(v for (t, v) in reg.entries if t == type_tag)


def raw_view(value: ExampleValue) -> Composite:
    return Composite(value.type_tag, (KeyValue(tuple(value.fields())),))


def render(value: ExampleValue, view_id: str, reg: ViewRegistry) -> RenderNode:
    if view_id == RAW:
        return raw_view(value)
    fn = reg.entries.get((value.type_tag, view_id))
    if fn is None:
        raise UnknownView(value.type_tag, view_id)
    return fn(value)


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def render_to_markdown(node: RenderNode) -> str:
    if isinstance(node, Text):
        return node.content
    if isinstance(node, KeyValue):
        return "\n".join(f"- **{k}:** {v}" for k, v in node.pairs)
    if isinstance(node, Table):
        lines = [
            "| " + " | ".join(_md_cell(c) for c in node.columns) + " |",
            "| " + " | ".join("---" for _ in node.columns) + " |",
        ]
        lines += ["| " + " | ".join(_md_cell(c) for c in row) + " |" for row in node.rows]
        return "\n".join(lines)
    if isinstance(node, ListNode):
        return "\n\n".join(render_to_markdown(n) for n in node.items)
    if isinstance(node, Composite):
        parts = [f"**{node.label}**"] + [render_to_markdown(n) for n in node.children]
        return "\n\n".join(parts)
    raise TypeError(f"not a render node: {node!r}")


def _text_table(columns: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c)
              for i, c in enumerate(columns)]

    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = [line(columns), line(["-" * w for w in widths])]
    out += [line(r) for r in rows]
    return "\n".join(out)


def render_to_text(node: RenderNode) -> str:
    if isinstance(node, Text):
        return node.content
    if isinstance(node, KeyValue):
        return "\n".join(f"{k}: {v}" for k, v in node.pairs)
    if isinstance(node, Table):
        return _text_table(node.columns, node.rows)
    if isinstance(node, ListNode):
        return "\n\n".join(render_to_text(n) for n in node.items)
    if isinstance(node, Composite):
        return "\n\n".join([node.label] + [render_to_text(n) for n in node.children])
    raise TypeError(f"not a render node: {node!r}")
