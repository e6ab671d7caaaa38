"""Command line entry point.

::

    exemplar run [--filter G] [--format text|json] [--fail-fast] [--fresh]
    exemplar graph [--format dot|json]
    exemplar inspect <id> [--view V] [--format text|md]
    exemplar doc build <in> -o <out> [--fresh]
    exemplar doc check <in>...

Exit codes: 0 success, 1 example or doc failures, 2 usage errors, 3 graph
errors (cycles, unknown dependencies). ``--suite module:attr`` (repeatable,
before the subcommand) loads extra suites; the prices demo is always loaded.
"""

from __future__ import annotations

import argparse
import importlib
import json
import sys
from dataclasses import dataclass, field
from typing import TextIO

from . import prices
from .core import ExampleGraph, ExampleRegistry, build_graph, graph_to_dot, graph_to_json
from .docbook import build_document, parse_document
from .errors import CycleDetected, ExemplarError, UnknownDependency, UsageError
from .runner import Passed, RunPolicy, describe, Sharing, report_to_json, report_to_text, run_all, run_to
from .views import ViewRegistry, available_views, render, render_to_markdown, render_to_text

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_GRAPH = 3


@dataclass(frozen=True)
class Run:
    filter: str | None = None
    format: str = "text"
    fail_fast: bool = False
    sharing: Sharing = Sharing.SHARE


@dataclass(frozen=True)
class Graph:
    format: str = "dot"


@dataclass(frozen=True)
class Inspect:
    example_id: str
    view_id: str | None = None
    format: str = "text"


@dataclass(frozen=True)
class DocBuild:
    input_path: str
    output_path: str
    sharing: Sharing = Sharing.SHARE


@dataclass(frozen=True)
class DocCheck:
    input_paths: tuple[str, ...]


Command = Run | Graph | Inspect | DocBuild | DocCheck


@dataclass(frozen=True)
class Environment:
    registry: ExampleRegistry = field(default_factory=ExampleRegistry)
    views: ViewRegistry = field(default_factory=ViewRegistry)

    def merge(self, other: Environment) -> Environment:
        return Environment(self.registry.merge(other.registry), self.views.merge(other.views))


def demo_environment() -> Environment:
    return Environment(prices.demo_suite(), prices.demo_views())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "usage error")
        if message:
            sys.stderr.write(message)
        raise _HelpShown()


class _HelpShown(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exemplar", description="Run, inspect and document examples.")
    parser.add_argument("--suite", action="append", default=[], metavar="MODULE:ATTR",
                        help="extra example suite to load (repeatable)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    run = sub.add_parser("run", help="run all examples")
    run.add_argument("--filter", metavar="GLOB")
    run.add_argument("--format", choices=["text", "json"], default="text")
    run.add_argument("--fail-fast", action="store_true")
    run.add_argument("--fresh", action="store_true")

    graph = sub.add_parser("graph", help="print the dependency graph")
    graph.add_argument("--format", choices=["dot", "json"], default="dot")

    inspect = sub.add_parser("inspect", help="run one example and render a view of it")
    inspect.add_argument("example_id", metavar="ID")
    inspect.add_argument("--view", metavar="VIEW")
    inspect.add_argument("--format", choices=["text", "md"], default="text")

    doc = sub.add_parser("doc", help="build or check live documentation")
    doc_sub = doc.add_subparsers(dest="doc_command", parser_class=_Parser, required=True)
    build = doc_sub.add_parser("build")
    build.add_argument("input")
    build.add_argument("-o", "--output", required=True)
    build.add_argument("--fresh", action="store_true")
    check = doc_sub.add_parser("check")
    check.add_argument("inputs", nargs="+")
    return parser


def _parse(argv: list[str]) -> argparse.Namespace:
    ns = _build_parser().parse_args(list(argv))
    paths = [getattr(ns, "input", None), getattr(ns, "output", None)]
    paths += getattr(ns, "inputs", None) or []
    for path in paths:
        if path is not None and not path:
            raise UsageError("paths must be non-empty")
    return ns


def parse_command(argv: list[str]) -> Command:
    """Parse *argv* (without the program name). Raises :class:`UsageError`."""
    return _to_command(_parse(argv))


def _to_command(ns: argparse.Namespace) -> Command:
    sharing = Sharing.FRESH if getattr(ns, "fresh", False) else Sharing.SHARE
    if ns.command == "run":
        return Run(ns.filter, ns.format, ns.fail_fast, sharing)
    if ns.command == "graph":
        return Graph(ns.format)
    if ns.command == "inspect":
        return Inspect(ns.example_id, ns.view, ns.format)
    if ns.doc_command == "build":
        return DocBuild(ns.input, ns.output, sharing)
    return DocCheck(tuple(ns.inputs))


def load_suite(spec: str) -> Environment:
    """Load ``module:attr``; attr may be an Environment, a registry, or a callable
    returning either."""
    module_name, sep, attr = spec.partition(":")
    if not sep or not module_name or not attr:
        raise UsageError(f"--suite expects MODULE:ATTR, got {spec!r}")
    try:
        obj = getattr(importlib.import_module(module_name), attr)
    except (ImportError, AttributeError) as exc:
        raise UsageError(f"cannot load suite {spec!r}: {exc}") from exc
    if callable(obj) and not isinstance(obj, (Environment, ExampleRegistry)):
        obj = obj()
    if isinstance(obj, ExampleRegistry):
        return Environment(obj)
    if isinstance(obj, Environment):
        return obj
    raise UsageError(f"suite {spec!r} is neither an Environment nor an ExampleRegistry")


def execute(cmd: Command, env: Environment, stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        graph = build_graph(env.registry)
    except (CycleDetected, UnknownDependency) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_GRAPH

    if isinstance(cmd, Run):
        try:
            policy = RunPolicy(cmd.sharing, cmd.filter, cmd.fail_fast)
        except ExemplarError as exc:
            print(f"error: {exc}", file=stderr)
            return EXIT_USAGE
        report = run_all(graph, policy)
        if cmd.format == "json":
            stdout.write(report_to_json(report) + "\n")
        else:
            stdout.write(report_to_text(report))
        return EXIT_OK if report.counts.failed == 0 else EXIT_FAILURES

    if isinstance(cmd, Graph):
        if cmd.format == "json":
            stdout.write(json.dumps(graph_to_json(graph)) + "\n")
        else:
            stdout.write(graph_to_dot(graph))
        return EXIT_OK

    if isinstance(cmd, Inspect):
        return _inspect(cmd, graph, env.views, stdout, stderr)

    if isinstance(cmd, DocBuild):
        return _doc_build(cmd, graph, env.views, stderr)

    if isinstance(cmd, DocCheck):
        return _doc_check(cmd, graph, env.views, stdout, stderr)

    raise TypeError(f"unknown command {cmd!r}")


def _inspect(cmd: Inspect, graph: ExampleGraph, views: ViewRegistry, stdout, stderr) -> int:
    if cmd.example_id not in graph:
        print(f"error: unknown example {cmd.example_id}", file=stderr)
        return EXIT_FAILURES
    status, value = run_to(graph, cmd.example_id)
    if not isinstance(status, Passed):
        print(f"{cmd.example_id}: {describe(status)}", file=stderr)
        return EXIT_FAILURES
    view_id = cmd.view_id or "raw"
    if view_id not in available_views(value.type_tag, views):
        known = ", ".join(available_views(value.type_tag, views))
        print(f"error: no view {view_id!r} for {value.type_tag} (available: {known})",
              file=stderr)
        return EXIT_FAILURES
    node = render(value, view_id, views)
    text = render_to_markdown(node) if cmd.format == "md" else render_to_text(node)
    stdout.write(text + "\n")
    return EXIT_OK


def _read(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as f:
        return f.read()


def _doc_build(cmd: DocBuild, graph, views, stderr) -> int:
    try:
        doc = parse_document(_read(cmd.input_path))
    except (OSError, ExemplarError) as exc:
        print(f"{cmd.input_path}: {exc}", file=stderr)
        return EXIT_FAILURES
    text, issues = build_document(doc, graph, views, RunPolicy(cmd.sharing))
    with open(cmd.output_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    for issue in issues:
        print(f"{cmd.input_path}: block {issue.block_index}: {issue.kind}: {issue.detail}",
              file=stderr)
    return EXIT_OK if not issues else EXIT_FAILURES


def _doc_check(cmd: DocCheck, graph, views, stdout, stderr) -> int:
    failed = False
    for path in cmd.input_paths:
        try:
            doc = parse_document(_read(path))
        except (OSError, ExemplarError) as exc:
            print(f"{path}: {exc}", file=stderr)
            failed = True
            continue
        _, issues = build_document(doc, graph, views)
        for issue in issues:
            stdout.write(f"{path}: block {issue.block_index}: {issue.kind}: {issue.detail}\n")
        failed = failed or bool(issues)
    return EXIT_FAILURES if failed else EXIT_OK


def main(argv: list[str] | None = None, env: Environment | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = _parse(argv)
        cmd = _to_command(ns)
        if env is None:
            env = demo_environment()
            for spec in ns.suite:
                env = env.merge(load_suite(spec))
    except _HelpShown:
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExemplarError as exc:
        # duplicate ids across suites
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    return execute(cmd, env)


if __name__ == "__main__":
    sys.exit(main())
