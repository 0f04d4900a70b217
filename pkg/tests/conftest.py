import random

import pytest

from qcsptools.structures import Signature, Structure

DIGRAPH = Signature((("E", 2),))


def random_digraph(rng: random.Random, max_size=3, density=0.5) -> Structure:
    n = rng.randint(1, max_size)
    edges = [(x, y) for x in range(n) for y in range(n) if rng.random() < density]
    return Structure.build(DIGRAPH, n, {"E": edges})


def symmetric_graph(n, undirected_edges) -> Structure:
    edges = []
    for x, y in undirected_edges:
        edges += [(x, y), (y, x)]
    return Structure.build(DIGRAPH, n, {"E": edges})


@pytest.fixture
def rng():
    return random.Random(20260826)
