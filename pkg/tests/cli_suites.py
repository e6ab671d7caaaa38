"""Suites loaded through ``exemplar --suite`` in CLI tests."""

from exemplar import ExampleDefinition, ExampleRegistry, inject_fault
from exemplar.cli import Environment
from exemplar.prices import demo_suite, demo_views

extra = ExampleRegistry.of(
    ExampleDefinition("extra.one", (), lambda: 1),
    ExampleDefinition("extra.two", ("extra.one",), lambda one: one + 1),
)


def rigged():
    return Environment(inject_fault(demo_suite(), "prices.discountedFixed"), demo_views())


cyclic = ExampleRegistry.of(
    ExampleDefinition("loop.a", ("loop.b",), lambda b: b),
    ExampleDefinition("loop.b", ("loop.a",), lambda a: a),
)

dangling = ExampleRegistry.of(ExampleDefinition("dangling.a", ("dangling.gone",), lambda g: g))

not_a_suite = 42
