"""Examples are tests that return what they built.

Run with ``python demos/01_examples_as_fixtures.py``.
"""

from exemplar import (
    ExampleRegistry,
    build_graph,
    example,
    inject_fault,
    root_causes,
    run_all,
    run_to,
    simulate_flat_failures,
    topo_order,
)
from exemplar.runner import report_to_text

# %% A small stack of examples. Each one receives the values of the examples
# it depends on, asserts something, and hands its own value on.


@example("stack.empty")
def empty():
    s = []
    assert len(s) == 0
    return s


@example("stack.one", deps=["stack.empty"])
def one(s):
    s = s + [1]
    assert s[-1] == 1
    return s


@example("stack.two", deps=["stack.one"])
def two(s):
    s = s + [2]
    assert s == [1, 2]
    return s


@example("stack.popped", deps=["stack.two"])
def popped(s):
    s = s[:-1]
    assert s == [1]
    return s


suite = ExampleRegistry.of(empty, one, two, popped)
graph = build_graph(suite)
print("run order:", topo_order(graph))

# %% A green run keeps every example around for inspection.
report = run_all(graph)
print(report_to_text(report))
print("stack.two produced", report.cache["stack.two"].payload)

# %% Jump straight to one example: only its ancestors run.
status, value = run_to(graph, "stack.one")
print("stack.one:", status, value.payload)

# %% Break one example. Its dependents are skipped, not failed, so the
# report points at a single culprit.
broken = build_graph(inject_fault(suite, "stack.one", "push went wrong"))
report = run_all(broken)
print(report_to_text(report))
print("root causes:", root_causes(report, broken))
print("failures if every test rebuilt its own setup:",
      simulate_flat_failures(broken, {"stack.one"}))
