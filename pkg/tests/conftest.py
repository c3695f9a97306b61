import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from localcd import Graph


def make_graph(edges, n=None) -> Graph:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return Graph.from_edges(edges[:, 0], edges[:, 1], n=n)


def path_graph(n) -> Graph:
    return make_graph([(i, i + 1) for i in range(n - 1)])


def clique_edges(nodes):
    nodes = list(nodes)
    return [
        (nodes[i], nodes[j])
        for i in range(len(nodes))
        for j in range(i + 1, len(nodes))
    ]


def barbell_graph(clique_size=5) -> Graph:
    """Two cliques joined by a single bridge edge."""
    a = list(range(clique_size))
    b = list(range(clique_size, 2 * clique_size))
    edges = clique_edges(a) + clique_edges(b) + [(a[-1], b[0])]
    return make_graph(edges)


def random_connected_graph(rng: np.random.Generator, n: int, extra: float = 0.3) -> Graph:
    """Random tree plus extra edges; always connected, deterministic in rng."""
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    n_extra = int(extra * n)
    for _ in range(n_extra):
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            edges.append((u, v))
    return make_graph(edges, n=n)
