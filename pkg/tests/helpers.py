"""Random DAG construction and instrumented producers for tests."""

import random
from collections import Counter

from hypothesis import strategies as st

from exemplar import ExampleDefinition, ExampleRegistry


def node_name(i):
    return f"g.n{i:02d}"


def random_shape(rng: random.Random, max_nodes=50, max_deps=3):
    """Return ``{id: [deps]}`` for a random DAG; ids are shuffled so that
    construction order and lexicographic order disagree."""
    n = rng.randint(1, max_nodes)
    names = [node_name(i) for i in range(n)]
    rng.shuffle(names)
    shape = {}
    for i, name in enumerate(names):
        k = rng.randint(0, min(max_deps, i))
        shape[name] = rng.sample(names[:i], k)
    return shape


@st.composite
def dag_shapes(draw, max_nodes=10, max_deps=3):
    n = draw(st.integers(1, max_nodes))
    names = draw(st.permutations([node_name(i) for i in range(n)]))
    shape = {}
    for i, name in enumerate(names):
        deps = draw(st.lists(st.sampled_from(names[:i]), max_size=max_deps, unique=True)
                    if i else st.just([]))
        shape[name] = deps
    return shape


class Instrumented:
    """Builds a registry from a shape whose producers count their invocations."""

    def __init__(self, shape, faults=(), setup_faults=()):
        self.shape = shape
        self.calls = Counter()
        self.faults = set(faults)
        self.setup_faults = set(setup_faults)

    def producer(self, name):
        def produce(*args):
            self.calls[name] += 1
            if name in self.setup_faults:
                raise RuntimeError(f"{name} could not be built")
            assert name not in self.faults, f"{name} is rigged"
            return 1 + sum(args)
        return produce

    def registry(self):
        return ExampleRegistry.of(*(
            ExampleDefinition(name, tuple(deps), self.producer(name))
            for name, deps in self.shape.items()
        ))


def brute_reachable(shape, src):
    """Dependents of *src* by fixpoint iteration over one-step edges."""
    reached = set()
    changed = True
    while changed:
        changed = False
        for node, deps in shape.items():
            if node not in reached and (src in deps or reached & set(deps)):
                reached.add(node)
                changed = True
    return reached


def brute_flat_failures(shape, faults):
    """Count nodes having some dependency chain (including themselves) that
    passes through a fault, by enumerating every chain explicitly."""

    def chains(node):
        deps = shape[node]
        if not deps:
            yield [node]
        for d in deps:
            for c in chains(d):
                yield c + [node]

    return sum(1 for n in shape if any(set(c) & set(faults) for c in chains(n)))
