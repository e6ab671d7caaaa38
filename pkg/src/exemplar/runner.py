"""Run examples in dependency order, inject produced values, propagate skips.

A producer that raises ``AssertionError`` fails in the assertion phase; any
other exception is a setup failure. Dependents of a non-passed example are
skipped and point at the earliest (in run order) non-passed ancestor, which is
always a failed example, i.e. a root cause.
"""

from __future__ import annotations

import dataclasses
import enum
import fnmatch
import json
import re
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .core import ExampleGraph, ancestors, topo_order
from .errors import FilterError, UnknownId

__all__ = [
    "ExampleValue",
    "Sharing",
    "RunPolicy",
    "Phase",
    "Passed",
    "Failed",
    "Skipped",
    "Counts",
    "describe",
    "RunReport",
    "Runner",
    "run_all",
    "run_to",
    "root_causes",
    "simulate_flat_failures",
    "report_to_dict",
    "report_to_json",
    "report_to_text",
    "zero_durations",
    "default_structure",
]


def default_structure(payload) -> list[tuple[str, str]]:
    """Field/value pairs for the raw view of an arbitrary object."""
    if dataclasses.is_dataclass(payload) and not isinstance(payload, type):
        return [(f.name, str(getattr(payload, f.name))) for f in dataclasses.fields(payload)]
    if isinstance(payload, dict):
        return [(str(k), str(v)) for k, v in payload.items()]
    if isinstance(payload, (list, tuple)):
        return [(str(i), str(v)) for i, v in enumerate(payload)]
    attrs = getattr(payload, "__dict__", None)
    if attrs:
        return [(k, str(v)) for k, v in attrs.items() if not k.startswith("_")]
    return [("value", repr(payload))]


@dataclass(frozen=True)
class ExampleValue:
    """A produced example: the payload plus what views need to display it."""

    type_tag: str
    payload: Any
    structure: Callable[[Any], list[tuple[str, str]]] = field(
        default=default_structure, compare=False
    )
    duplicator: Callable[[Any], Any] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.type_tag:
            raise ValueError("type_tag must be non-empty")

    @classmethod
    def of(cls, payload, type_tag: str | None = None, **kwargs) -> ExampleValue:
        if isinstance(payload, ExampleValue):
            return payload
        return cls(type_tag or type(payload).__name__, payload, **kwargs)

    def fields(self) -> list[tuple[str, str]]:
        return [(str(k), str(v)) for k, v in self.structure(self.payload)]


class Sharing(enum.Enum):
    SHARE = "share"
    FRESH = "fresh"


_GLOB_RE = re.compile(r"[A-Za-z0-9_.*?\[\]!-]+\Z")


def _validate_glob(pattern: str) -> str:
    if not isinstance(pattern, str) or not _GLOB_RE.match(pattern):
        raise FilterError(f"invalid filter pattern: {pattern!r}")
    depth = 0
    for ch in pattern:
        if ch == "[":
            if depth:
                raise FilterError(f"nested '[' in filter pattern: {pattern!r}")
            depth = 1
        elif ch == "]" and depth:
            depth = 0
    if depth:
        raise FilterError(f"unbalanced '[' in filter pattern: {pattern!r}")
    return pattern


@dataclass(frozen=True)
class RunPolicy:
    sharing: Sharing = Sharing.SHARE
    filter: str | None = None
    fail_fast: bool = False

    def __post_init__(self):
        if self.filter is not None:
            _validate_glob(self.filter)


class Phase(enum.Enum):
    SETUP = "setup"
    ASSERTION = "assertion"


@dataclass(frozen=True)
class Passed:
    duration_ms: float = 0.0
    name = "passed"


@dataclass(frozen=True)
class Failed:
    message: str
    phase: Phase
    name = "failed"


@dataclass(frozen=True)
class Skipped:
    blocked_by: str
    name = "skipped"


Status = Passed | Failed | Skipped


def describe(status: Status) -> str:
    if isinstance(status, Failed):
        return f"failed ({status.phase.value}): {status.message}"
    if isinstance(status, Skipped):
        return f"skipped: blocked by {status.blocked_by}"
    return "passed"


class Counts(NamedTuple):
    passed: int
    failed: int
    skipped: int


@dataclass
class RunReport:
    statuses: dict[str, Status]
    cache: dict[str, ExampleValue]
    total_duration_ms: float = 0.0

    @property
    def counts(self) -> Counts:
        kinds = [type(s) for s in self.statuses.values()]
        return Counts(kinds.count(Passed), kinds.count(Failed), kinds.count(Skipped))

    def zeroed(self) -> RunReport:
        """Copy with every duration set to zero, for comparing runs."""
        statuses = {
            k: Passed(0.0) if isinstance(s, Passed) else s for k, s in self.statuses.items()
        }
        return RunReport(statuses, dict(self.cache), 0.0)


def _fail_message(exc: BaseException) -> str:
    text = str(exc)
    return text if text else type(exc).__name__


class Runner:
    """Executes examples of one graph, remembering results between calls.

    Each example is executed at most once per runner under SHARE (FRESH may
    re-execute producing chains to hand out copies). Reusing one runner across
    several :meth:`run` calls is how a doc build shares values between embeds.
    """

    def __init__(self, g: ExampleGraph, policy: RunPolicy | None = None):
        self.graph = g
        self.policy = policy or RunPolicy()
        self.statuses: dict[str, Status] = {}
        self.cache: dict[str, ExampleValue] = {}
        self._rank = {n: i for i, n in enumerate(topo_order(g))}
        self._halted = False

    def select(self, pattern: str | None) -> set[str]:
        """Ids matching *pattern* plus all their ancestors."""
        if pattern is None:
            return set(self.graph.nodes)
        _validate_glob(pattern)
        hits = {n for n in self.graph.nodes if fnmatch.fnmatchcase(n, pattern)}
        closed = set(hits)
        for n in hits:
            closed |= ancestors(self.graph, n)
        return closed

    def run(self, selected: Iterable[str]) -> RunReport:
        selected = set(selected)
        for n in list(selected):
            selected |= ancestors(self.graph, n)
        start = time.perf_counter()
        for node in sorted(selected, key=self._rank.__getitem__):
            if node not in self.statuses:
                self._visit(node)
        elapsed = (time.perf_counter() - start) * 1000.0
        statuses = {n: self.statuses[n] for n in sorted(selected, key=self._rank.__getitem__)
                    if n in self.statuses}
        cache = {n: self.cache[n] for n in statuses if n in self.cache}
        return RunReport(statuses, cache, elapsed)

    def _visit(self, node: str) -> None:
        deps = self.graph.deps(node)
        blockers = []
        for d in deps:
            s = self.statuses.get(d)
            if isinstance(s, Failed):
                blockers.append(d)
            elif isinstance(s, Skipped):
                blockers.append(s.blocked_by)
        if blockers:
            self.statuses[node] = Skipped(min(blockers, key=self._rank.__getitem__))
            return
        # deps left unexecuted after a fail-fast halt exclude the node
        if self._halted or any(d not in self.statuses for d in deps):
            return

        t0 = time.perf_counter()
        try:
            args = [self._deliver(d) for d in deps]
            value = ExampleValue.of(self.graph.definitions[node].producer(*args))
        except AssertionError as exc:
            self._fail(node, Failed(_fail_message(exc), Phase.ASSERTION))
            return
        except Exception as exc:
            self._fail(node, Failed(f"{type(exc).__name__}: {exc}", Phase.SETUP))
            return
        self.statuses[node] = Passed(round((time.perf_counter() - t0) * 1000.0, 3))
        self.cache[node] = value

    def _fail(self, node: str, status: Failed) -> None:
        self.statuses[node] = status
        if self.policy.fail_fast:
            self._halted = True

    def _deliver(self, dep: str):
        value = self.cache[dep]
        if self.policy.sharing is Sharing.SHARE:
            return value.payload
        if value.duplicator is not None:
            return value.duplicator(value.payload)
        return self._reproduce(dep)

    def _reproduce(self, node: str):
        # FRESH without a duplicator: rebuild the whole producing chain.
        defn = self.graph.definitions[node]
        args = []
        for d in defn.deps:
            v = self.cache[d]
            args.append(v.duplicator(v.payload) if v.duplicator else self._reproduce(d))
        return ExampleValue.of(defn.producer(*args)).payload


def run_all(g: ExampleGraph, policy: RunPolicy | None = None) -> RunReport:
    runner = Runner(g, policy)
    return runner.run(runner.select(runner.policy.filter))


def run_to(g: ExampleGraph, example_id: str, policy: RunPolicy | None = None,
           runner: Runner | None = None) -> tuple[Status, ExampleValue | None]:
    """Run *example_id* and its ancestors only; return its status and value.

    Pass a *runner* to reuse values computed by earlier calls.
    """
    if example_id not in g.nodes:
        raise UnknownId(example_id)
    runner = runner or Runner(g, policy)
    runner.run(ancestors(g, example_id) | {example_id})
    status = runner.statuses.get(example_id)
    if status is None:
        # unreachable: a halted run always leaves a failed ancestor behind
        raise RuntimeError(f"{example_id} was not executed")
    return status, runner.cache.get(example_id)


def root_causes(report: RunReport, g: ExampleGraph | None = None) -> set[str]:
    return {n for n, s in report.statuses.items() if isinstance(s, Failed)}


def simulate_flat_failures(g: ExampleGraph, faults: Iterable[str]) -> int:
    """How many tests would fail if every test inlined its whole setup chain."""
    faults = set(faults)
    for f in faults:
        if f not in g.nodes:
            raise UnknownId(f)
    return sum(1 for n in g.nodes if faults & (ancestors(g, n) | {n}))


def _status_entry(example_id: str, status: Status) -> dict:
    entry: dict[str, Any] = {"id": example_id, "status": status.name}
    if isinstance(status, Failed):
        entry["message"] = status.message
        entry["phase"] = status.phase.value
    elif isinstance(status, Skipped):
        entry["blockedBy"] = status.blocked_by
    else:
        entry["durationMs"] = status.duration_ms
    return entry


def report_to_dict(report: RunReport) -> dict:
    c = report.counts
    return {
        "summary": {
            "passed": c.passed,
            "failed": c.failed,
            "skipped": c.skipped,
            "durationMs": round(report.total_duration_ms, 3),
        },
        "examples": [_status_entry(k, report.statuses[k]) for k in sorted(report.statuses)],
    }


def report_to_json(report: RunReport, indent: int | None = None) -> str:
    separators = (",", ":") if indent is None else (",", ": ")
    return json.dumps(report_to_dict(report), indent=indent, separators=separators,
                      ensure_ascii=False)


def report_to_text(report: RunReport) -> str:
    lines = []
    for k, s in report.statuses.items():
        if isinstance(s, Passed):
            lines.append(f"PASS {k} ({s.duration_ms:.3f} ms)")
        elif isinstance(s, Failed):
            lines.append(f"FAIL {k} [{s.phase.value}] {s.message}")
        else:
            lines.append(f"SKIP {k} (blocked by {s.blocked_by})")
    c = report.counts
    lines.append(f"{c.passed} passed, {c.failed} failed, {c.skipped} skipped "
                 f"in {report.total_duration_ms:.3f} ms")
    return "\n".join(lines) + "\n"


def zero_durations(doc: dict) -> dict:
    """Zero every ``durationMs`` field of a parsed JSON report in place."""
    doc["summary"]["durationMs"] = 0
    for e in doc["examples"]:
        if "durationMs" in e:
            e["durationMs"] = 0
    return doc
