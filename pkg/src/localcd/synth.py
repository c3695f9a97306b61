"""Synthetic test-instance generators with ground-truth communities.

All generators are deterministic for a fixed RNG seed and return both an
undirected edge list (one row per edge) and the list of ground-truth
communities as node-id arrays.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

__all__ = [
    "ring_of_cliques",
    "path_of_cliques",
    "planted_partition",
    "edges_to_graph",
    "write_dataset",
]


def _clique_edges(nodes: np.ndarray) -> list[tuple[int, int]]:
    return [
        (int(nodes[i]), int(nodes[j]))
        for i in range(len(nodes))
        for j in range(i + 1, len(nodes))
    ]


def ring_of_cliques(num_cliques: int, clique_size: int):
    """Cliques arranged in a cycle, one bridge edge between neighbors.

    n = num_cliques * clique_size, m = num_cliques * C(clique_size, 2) +
    num_cliques. Each clique is a ground-truth community.
    """
    if num_cliques < 2:
        raise ValueError("need at least 2 cliques")
    if clique_size < 2:
        raise ValueError("clique size must be >= 2")
    edges = []
    communities = []
    for c in range(num_cliques):
        nodes = np.arange(c * clique_size, (c + 1) * clique_size, dtype=np.int64)
        edges.extend(_clique_edges(nodes))
        communities.append(nodes)
    for c in range(num_cliques):
        nxt = (c + 1) % num_cliques
        edges.append((c * clique_size + clique_size - 1, nxt * clique_size))
    return np.array(edges, dtype=np.int64), communities


def path_of_cliques(num_cliques: int, clique_size: int, cliques_per_community: int | None = None):
    """Cliques chained in a path, one bridge edge between consecutive cliques.

    By default the ground truth is a single end-to-end community spanning
    every clique (a large-diameter community family); pass
    ``cliques_per_community`` to split the path into consecutive runs of
    that many cliques instead (must divide the clique count).
    """
    if num_cliques < 2:
        raise ValueError("need at least 2 cliques")
    if clique_size < 2:
        raise ValueError("clique size must be >= 2")
    if cliques_per_community is None:
        cliques_per_community = num_cliques
    if num_cliques % cliques_per_community != 0:
        raise ValueError("cliques_per_community must divide num_cliques")
    edges = []
    for c in range(num_cliques):
        nodes = np.arange(c * clique_size, (c + 1) * clique_size, dtype=np.int64)
        edges.extend(_clique_edges(nodes))
        if c + 1 < num_cliques:
            edges.append((c * clique_size + clique_size - 1, (c + 1) * clique_size))
    span = cliques_per_community * clique_size
    communities = [
        np.arange(start, start + span, dtype=np.int64)
        for start in range(0, num_cliques * clique_size, span)
    ]
    return np.array(edges, dtype=np.int64), communities


def planted_partition(num_blocks: int, block_size: int, p_in: float, p_out: float, seed: int):
    """Planted-partition graph: blocks with edge density p_in inside, p_out across."""
    if num_blocks < 2 or block_size < 2:
        raise ValueError("need at least 2 blocks of at least 2 nodes")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError("need 0 <= p_out <= p_in <= 1")
    rng = np.random.default_rng(seed)
    n = num_blocks * block_size
    block_of = np.arange(n) // block_size
    iu, ju = np.triu_indices(n, k=1)
    same = block_of[iu] == block_of[ju]
    prob = np.where(same, p_in, p_out)
    keep = rng.random(len(iu)) < prob
    edges = np.stack([iu[keep], ju[keep]], axis=1).astype(np.int64)
    communities = [
        np.arange(b * block_size, (b + 1) * block_size, dtype=np.int64)
        for b in range(num_blocks)
    ]
    return edges, communities


def edges_to_graph(edges: np.ndarray, n: int | None = None) -> Graph:
    return Graph.from_edges(edges[:, 0], edges[:, 1], n=n)


def write_dataset(out_dir, edges: np.ndarray, communities) -> tuple[str, str]:
    """Write edges.txt and cmty.txt in the standard text formats."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    edge_path = os.path.join(out_dir, "edges.txt")
    cmty_path = os.path.join(out_dir, "cmty.txt")
    with open(edge_path, "w") as fh:
        for u, v in edges:
            fh.write(f"{u} {v}\n")
    with open(cmty_path, "w") as fh:
        for comm in communities:
            fh.write(" ".join(str(int(v)) for v in comm) + "\n")
    return edge_path, cmty_path
