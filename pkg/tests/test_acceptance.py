"""Exit criteria for the package, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import os
import random
import re
import subprocess
import sys
import time
from pathlib import Path

import pytest

from exemplar import (
    ExampleDefinition,
    ExampleRegistry,
    ExampleValue,
    Failed,
    Passed,
    RunPolicy,
    Sharing,
    Skipped,
    ancestors,
    build_graph,
    check_document,
    inject_fault,
    parse_document,
    run_all,
    run_to,
    simulate_flat_failures,
    transitive_dependents,
)
from exemplar.cli import Environment, main
from exemplar.docbook import IssueKind, build_document
from exemplar.prices import (
    FixedDiscount,
    Money,
    PercentDiscount,
    as_price,
    demo_suite,
    demo_views,
    discounted_by,
    euros,
    total_value,
)

from helpers import Instrumented, random_shape
from test_prices import oracle_total

ROOT = Path(__file__).resolve().parent.parent
PRICES_MD = ROOT / "docs" / "prices.md"
GOLDEN = ROOT / "tests" / "golden" / "prices.md"
CORPUS = sorted((ROOT / "tests" / "corpus").glob("*.md"))

N_DAGS = 250
MAX_NODES = 50
MAX_DEPS = 3
LOCALIZATION_BUDGET_S = 5.0
N_PRICES = 1000


def random_runs(seed=2024):
    rng = random.Random(seed)
    for _ in range(N_DAGS):
        shape = random_shape(rng, MAX_NODES, MAX_DEPS)
        fault = rng.choice(sorted(shape))
        inst = Instrumented(shape, faults={fault})
        g = build_graph(inst.registry())
        yield shape, fault, inst, g, run_all(g)


@pytest.mark.criterion("defect localization: 1 failed, |dependents| skipped, fewer than flat")
def test_defect_localization():
    start = time.perf_counter()
    strictly_fewer = 0
    for shape, fault, inst, g, report in random_runs():
        assert all(len(deps) <= MAX_DEPS for deps in shape.values())
        assert len(shape) <= MAX_NODES
        dependents = transitive_dependents(g, fault)
        assert report.counts.failed == 1
        assert report.counts.skipped == len(dependents)
        flat = simulate_flat_failures(g, {fault})
        assert flat == 1 + len(dependents)
        if dependents:
            assert report.counts.failed < flat
            strictly_fewer += 1
    elapsed = time.perf_counter() - start
    print(f"\n{N_DAGS} DAGs in {elapsed:.2f}s, {strictly_fewer} with fewer failures than flat")
    assert elapsed < LOCALIZATION_BUDGET_S
    assert strictly_fewer > 0


@pytest.mark.criterion("status partition invariant on every random run")
def test_status_partition():
    for shape, fault, inst, g, report in random_runs(seed=99):
        assert set(report.statuses) == set(shape)
        c = report.counts
        assert c.passed + c.failed + c.skipped == len(shape)
        assert set(report.cache) == {n for n, s in report.statuses.items()
                                     if isinstance(s, Passed)}
        for n, s in report.statuses.items():
            non_passed = {a for a in ancestors(g, n)
                          if not isinstance(report.statuses[a], Passed)}
            assert isinstance(s, Skipped) == bool(non_passed)
            if isinstance(s, Failed):
                assert all(isinstance(report.statuses[d], Passed) for d in shape[n])
            if isinstance(s, Skipped):
                assert s.blocked_by in non_passed


@pytest.mark.criterion("SHARE: one invocation per producer; runTo runs ancestors only")
def test_share_invocation_counts():
    rng = random.Random(5)
    for _ in range(100):
        shape = random_shape(rng, MAX_NODES, MAX_DEPS)
        inst = Instrumented(shape)
        g = build_graph(inst.registry())
        assert run_all(g).counts.passed == len(shape)
        assert dict(inst.calls) == dict.fromkeys(shape, 1)

        target = rng.choice(sorted(shape))
        inst.calls.clear()
        status, _ = run_to(g, target)
        assert isinstance(status, Passed)
        assert dict(inst.calls) == dict.fromkeys(ancestors(g, target) | {target}, 1)


@pytest.mark.criterion("FRESH: sibling sees an unmutated copy")
def test_fresh_isolation():
    for with_duplicator in (False, True):
        seen = {}

        def container():
            return ["original"]

        def mutator(box):
            box.append("mutated")
            seen["mutator"] = list(box)
            return len(box)

        def observer(box):
            seen["observer"] = list(box)
            return len(box)

        def producer():
            if with_duplicator:
                return ExampleValue("Box", container(), duplicator=list)
            return container()

        reg = ExampleRegistry.of(
            ExampleDefinition("box", (), producer),
            ExampleDefinition("box.mutator", ("box",), mutator),
            ExampleDefinition("box.observer", ("box",), observer),
        )
        report = run_all(build_graph(reg), RunPolicy(sharing=Sharing.FRESH))
        assert report.counts == (3, 0, 0)
        assert seen["mutator"] == ["original", "mutated"]
        assert seen["observer"] == ["original"]
        assert report.cache["box"].payload == ["original"]


def _cli(*argv):
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(
        [str(ROOT / "src"), os.environ.get("PYTHONPATH", "")]))
    return subprocess.run([sys.executable, "-m", "exemplar", *argv], capture_output=True,
                          env=env, cwd=ROOT)


_DURATION = re.compile(rb'"durationMs":-?[0-9][0-9.eE+-]*')


@pytest.mark.criterion("determinism: run --format json and graph --format dot")
def test_determinism():
    first, second = _cli("run", "--format", "json"), _cli("run", "--format", "json")
    assert first.returncode == second.returncode == 0
    zeroed = [_DURATION.sub(b'"durationMs":0', p.stdout) for p in (first, second)]
    assert zeroed[0] == zeroed[1]
    assert json.loads(zeroed[0])["summary"] == {
        "passed": 4, "failed": 0, "skipped": 0, "durationMs": 0}

    dots = [_cli("graph", "--format", "dot") for _ in range(2)]
    assert dots[0].returncode == 0
    assert dots[0].stdout == dots[1].stdout
    assert b'"prices.hundredEuros" -> "prices.discountedFixed";' in dots[0].stdout


def random_valid_price(rng):
    currency = rng.choice(["EUR", "USD", "CHF", "JPY"])
    p = as_price(Money(rng.randint(0, 10**6), currency))
    for _ in range(rng.randint(0, 4)):
        if rng.random() < 0.5:
            p = discounted_by(p, PercentDiscount(rng.randint(0, 10000)))
        else:
            # bounded by the oracle's running total so no stage overdraws
            p = discounted_by(p, FixedDiscount(Money(rng.randint(0, int(oracle_total(p))),
                                                     currency)))
    return p


@pytest.mark.criterion("prices: exact rational oracle, 72.00 EUR chain, demo suite 4/0/0")
def test_prices_oracle():
    rng = random.Random(11)
    checked = 0
    for _ in range(N_PRICES):
        p = random_valid_price(rng)
        assert total_value(p).amount_minor == oracle_total(p)
        checked += 1
    assert checked >= N_PRICES

    twice = discounted_by(discounted_by(as_price(euros(100)), FixedDiscount(euros(20))),
                          PercentDiscount(1000))
    assert total_value(twice) == Money(7200, "EUR")
    assert str(total_value(twice)) == "72.00 EUR"

    report = run_all(build_graph(demo_suite()))
    assert report.counts == (4, 0, 0)


def _doc_check(tmp_path, text, env=None):
    page = tmp_path / "page.md"
    page.write_text(text, encoding="utf-8")
    return main(["doc", "check", str(page)], env)


@pytest.mark.criterion("live docs: golden build; missing/unknown-view/rigged make check fail")
def test_live_doc_causal_connection(tmp_path, capsys):
    out = tmp_path / "prices.out.md"
    proc = _cli("doc", "build", str(PRICES_MD), "-o", str(out))
    assert proc.returncode == 0
    assert out.read_bytes() == GOLDEN.read_bytes()

    text = PRICES_MD.read_text(encoding="utf-8")
    graph, views = build_graph(demo_suite()), demo_views()
    assert main(["doc", "check", str(PRICES_MD)]) == 0

    missing = text.replace("id: prices.hundredEuros", "id: prices.hundredDollars")
    unknown_view = text.replace("view: overview", "view: summary", 1)
    rigged = Environment(inject_fault(demo_suite(), "prices.discountedFixed"), views)
    rigged_graph = build_graph(rigged.registry)

    cases = [
        (missing, None, graph, IssueKind.MISSING),
        (unknown_view, None, graph, IssueKind.UNKNOWN_VIEW),
        # the page embeds prices.discountedTwice, which depends on the rigged example
        (text, rigged, rigged_graph, IssueKind.SKIPPED),
    ]
    for page_text, env, g, kind in cases:
        assert _doc_check(tmp_path, page_text, env) == 1
        issues = check_document(parse_document(page_text), g, views)
        assert [i.kind for i in issues] == [kind]
    capsys.readouterr()


@pytest.mark.criterion("lossless parse: >= 20 directive-free files round-trip")
def test_lossless_corpus():
    assert len(CORPUS) >= 20
    graph, views = build_graph(demo_suite()), demo_views()
    for path in CORPUS:
        data = path.read_bytes()
        doc = parse_document(data.decode("utf-8"))
        assert not doc.embeds, path.name
        out, issues = build_document(doc, graph, views)
        assert out.encode("utf-8") == data, path.name
        assert issues == []


CYCLE_ENV = Environment(ExampleRegistry.of(
    ExampleDefinition("cyc.a", ("cyc.b",), lambda b: b),
    ExampleDefinition("cyc.b", ("cyc.a",), lambda a: a),
))
UNKNOWN_DEP_ENV = Environment(ExampleRegistry.of(
    ExampleDefinition("dep.a", ("dep.missing",), lambda m: m),
))
RIGGED_ENV = Environment(inject_fault(demo_suite(), "prices.discountedFixed"), demo_views())

EXIT_CODES = [
    (["run"], None, 0),
    (["run", "--format", "json"], None, 0),
    (["graph", "--format", "dot"], None, 0),
    (["graph", "--format", "json"], None, 0),
    (["inspect", "prices.hundredEuros", "--view", "overview"], None, 0),
    (["doc", "check", str(PRICES_MD)], None, 0),
    (["run"], RIGGED_ENV, 1),
    (["inspect", "prices.discountedTwice"], RIGGED_ENV, 1),
    (["inspect", "prices.unknown"], None, 1),
    (["doc", "check", str(PRICES_MD)], RIGGED_ENV, 1),
    ([], None, 2),
    (["explode"], None, 2),
    (["run", "--nope"], None, 2),
    (["run", "--format", "yaml"], None, 2),
    (["run", "--filter", "bad pattern"], None, 2),
    (["inspect"], None, 2),
    (["doc", "build", str(PRICES_MD)], None, 2),
    (["doc", "check"], None, 2),
    (["run"], CYCLE_ENV, 3),
    (["graph"], CYCLE_ENV, 3),
    (["inspect", "cyc.a"], CYCLE_ENV, 3),
    (["doc", "check", str(PRICES_MD)], CYCLE_ENV, 3),
    (["graph"], UNKNOWN_DEP_ENV, 3),
    (["run"], UNKNOWN_DEP_ENV, 3),
]


@pytest.mark.criterion("CLI exit codes 0/1/2/3")
def test_cli_exit_codes(capsys):
    for argv, env, expected in EXIT_CODES:
        assert main(argv, env) == expected, argv
    capsys.readouterr()
    assert {code for _, _, code in EXIT_CODES} == {0, 1, 2, 3}
