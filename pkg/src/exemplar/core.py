"""Example definitions, the registry, and the dependency graph over them.

An example is a producer function that receives the values of the examples it
depends on (in declared order), asserts things about what it builds, and
returns the value. Ids are dotted names such as ``prices.hundredEuros``.

>>> reg = ExampleRegistry.of(
...     ExampleDefinition("a", (), lambda: 1),
...     ExampleDefinition("b", ("a",), lambda a: a + 1),
... )
>>> g = build_graph(reg)
>>> topo_order(g)
['a', 'b']
>>> sorted(transitive_dependents(g, "a"))
['b']
"""

from __future__ import annotations

import heapq
import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType

from .errors import (
    CycleDetected,
    DuplicateId,
    InvalidDefinition,
    InvalidExampleId,
    UnknownDependency,
    UnknownId,
)

__all__ = [
    "ExampleDefinition",
    "ExampleRegistry",
    "ExampleGraph",
    "validate_id",
    "is_valid_id",
    "example",
    "register",
    "build_graph",
    "topo_order",
    "transitive_dependents",
    "ancestors",
    "inject_fault",
    "graph_to_dot",
    "graph_to_json",
]

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*\Z")


def is_valid_id(value) -> bool:
    return isinstance(value, str) and _ID_RE.match(value) is not None


def validate_id(value) -> str:
    """Return *value* unchanged if it is a well-formed example id, else raise."""
    if not is_valid_id(value):
        raise InvalidExampleId(value)
    return value


@dataclass(frozen=True)
class ExampleDefinition:
    """A named producer plus the ids of the examples it consumes."""

    id: str
    deps: tuple[str, ...]
    producer: Callable
    description: str | None = None

    def __post_init__(self):
        validate_id(self.id)
        deps = tuple(self.deps)
        for dep in deps:
            validate_id(dep)
        if len(set(deps)) != len(deps):
            raise InvalidDefinition(f"{self.id}: duplicate dependency in {list(deps)}")
        if self.id in deps:
            raise InvalidDefinition(f"{self.id}: an example cannot depend on itself")
        if not callable(self.producer):
            raise InvalidDefinition(f"{self.id}: producer is not callable")
        object.__setattr__(self, "deps", deps)


def example(id: str, deps: Iterable[str] = (), description: str | None = None):
    """Decorator turning a function into an :class:`ExampleDefinition`.

    The docstring of the function is used as description when none is given.
    """

    def wrap(fn: Callable) -> ExampleDefinition:
        doc = description if description is not None else fn.__doc__
        return ExampleDefinition(id, tuple(deps), fn, doc.strip() if doc else None)

    return wrap


@dataclass(frozen=True, eq=False)
class ExampleRegistry:
    entries: Mapping[str, ExampleDefinition] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    @classmethod
    def of(cls, *defs: ExampleDefinition) -> ExampleRegistry:
        reg = cls()
        for d in defs:
            reg = register(d, reg)
        return reg

    def register(self, defn: ExampleDefinition) -> ExampleRegistry:
        return register(defn, self)

    def merge(self, other: ExampleRegistry) -> ExampleRegistry:
        reg = self
        for d in other:
            reg = register(d, reg)
        return reg

    def __contains__(self, example_id) -> bool:
        return example_id in self.entries

    def __getitem__(self, example_id: str) -> ExampleDefinition:
        return self.entries[example_id]

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, ExampleRegistry):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __repr__(self):
        return f"ExampleRegistry({sorted(self.entries)})"


def register(defn: ExampleDefinition, reg: ExampleRegistry) -> ExampleRegistry:
    if defn.id in reg.entries:
        raise DuplicateId(defn.id)
    entries = dict(reg.entries)
    entries[defn.id] = defn
    return ExampleRegistry(entries)


@dataclass(frozen=True, eq=False)
class ExampleGraph:
    """Validated acyclic dependency graph. Build it with :func:`build_graph`.

    An edge ``(u, v)`` means *u* is a dependency of *v*.
    """

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    definitions: ExampleRegistry
    _dependents: Mapping[str, tuple[str, ...]] = field(repr=False)
    _order: tuple[str, ...] = field(repr=False)

    def deps(self, example_id: str) -> tuple[str, ...]:
        return self.definitions[self._known(example_id)].deps

    def dependents(self, example_id: str) -> tuple[str, ...]:
        """Direct dependents, sorted."""
        return self._dependents[self._known(example_id)]

    def _known(self, example_id: str) -> str:
        if example_id not in self.nodes:
            raise UnknownId(example_id)
        return example_id

    def __contains__(self, example_id) -> bool:
        return example_id in self.nodes

    def __eq__(self, other):
        if not isinstance(other, ExampleGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.definitions == other.definitions
        )

    def __hash__(self):
        return hash((self.nodes, self.edges))


def build_graph(reg: ExampleRegistry) -> ExampleGraph:
    ids = sorted(reg.entries)
    for node in ids:
        for dep in reg[node].deps:
            if dep not in reg.entries:
                raise UnknownDependency(node, dep)

    _check_acyclic(reg, ids)

    edges = frozenset((dep, node) for node in ids for dep in reg[node].deps)
    dependents: dict[str, list[str]] = {n: [] for n in ids}
    for dep, node in edges:
        dependents[dep].append(node)
    frozen = MappingProxyType({n: tuple(sorted(v)) for n, v in dependents.items()})
    order = _lexicographic_topo(ids, reg, frozen)
    return ExampleGraph(frozenset(ids), edges, reg, frozen, tuple(order))


def _check_acyclic(reg: ExampleRegistry, ids: list[str]) -> None:
    # Iterative DFS following dependency links; reports the first back edge found.
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(ids, WHITE)
    for start in ids:
        if color[start] != WHITE:
            continue
        path = [start]
        stack = [iter(reg[start].deps)]
        color[start] = GREY
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[nxt] == GREY:
                i = path.index(nxt)
                raise CycleDetected(path[i:] + [nxt])
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append(iter(reg[nxt].deps))


def _lexicographic_topo(ids, reg, dependents) -> list[str]:
    indegree = {n: len(reg[n].deps) for n in ids}
    ready = [n for n in ids if indegree[n] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for m in dependents[n]:
            indegree[m] -= 1
            if indegree[m] == 0:
                heapq.heappush(ready, m)
    return order


def topo_order(g: ExampleGraph) -> list[str]:
    """Dependencies first; ties among ready nodes broken by id."""
    return list(g._order)


def transitive_dependents(g: ExampleGraph, example_id: str) -> set[str]:
    g._known(example_id)
    seen: set[str] = set()
    frontier = [example_id]
    while frontier:
        for m in g._dependents[frontier.pop()]:
            if m not in seen:
                seen.add(m)
                frontier.append(m)
    return seen


def ancestors(g: ExampleGraph, example_id: str) -> set[str]:
    """All transitive dependencies of *example_id*, excluding itself."""
    g._known(example_id)
    seen: set[str] = set()
    frontier = [example_id]
    while frontier:
        for d in g.definitions[frontier.pop()].deps:
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    return seen


def inject_fault(
    reg: ExampleRegistry, example_id: str, message: str = "injected fault"
) -> ExampleRegistry:
    """Return a copy of *reg* whose *example_id* producer fails its assertion."""
    if example_id not in reg.entries:
        raise UnknownId(example_id)

    def rigged(*_args):
        raise AssertionError(message)

    entries = dict(reg.entries)
    entries[example_id] = replace(reg[example_id], producer=rigged)
    return ExampleRegistry(entries)


def graph_to_dot(g: ExampleGraph) -> str:
    lines = ["digraph examples {"]
    for dep, node in sorted(g.edges):
        lines.append(f'"{dep}" -> "{node}";')
    connected = {n for e in g.edges for n in e}
    for n in sorted(g.nodes - connected):
        lines.append(f'"{n}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: ExampleGraph) -> dict:
    return {
        "nodes": topo_order(g),
        "edges": [list(e) for e in sorted(g.edges)],
    }
