"""Graph representation and dataset preprocessing.

The graph is an immutable, undirected, unweighted simple graph stored in
compressed sparse row form (``indptr``/``indices``), with neighbor lists
sorted ascending. Node ids are dense integers in ``[0, n)``; an :class:`IdMap`
records the correspondence with the raw labels found in input files.

Also implements the dataset preprocessing pipeline: edge-list ingestion
(SNAP-style text files), largest-connected-component extraction, induced
subgraphs, and ground-truth community processing (restriction to the LCC,
splitting into connected components, minimum-size filtering, per-community
statistics).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import DataError

__all__ = [
    "Graph",
    "IdMap",
    "CommunityStats",
    "CommunityTable",
    "load_edge_list",
    "extract_lcc",
    "induced_subgraph",
    "process_communities",
    "community_diameter",
]


class IdMap:
    """Bijection between dense node ids and the raw labels they replaced.

    ``dense_to_raw[i]`` is the raw label of dense node ``i``. The inverse
    dict is built lazily on first use.
    """

    __slots__ = ("dense_to_raw", "_raw_to_dense")

    def __init__(self, dense_to_raw):
        self.dense_to_raw = np.ascontiguousarray(dense_to_raw, dtype=np.int64)
        self._raw_to_dense = None

    def __len__(self):
        return len(self.dense_to_raw)

    @property
    def raw_to_dense(self) -> dict:
        if self._raw_to_dense is None:
            self._raw_to_dense = {
                int(raw): i for i, raw in enumerate(self.dense_to_raw)
            }
        return self._raw_to_dense

    def to_raw(self, dense: int) -> int:
        return int(self.dense_to_raw[dense])

    def to_dense(self, raw: int) -> int:
        return self.raw_to_dense[int(raw)]

    @classmethod
    def identity(cls, n: int) -> "IdMap":
        return cls(np.arange(n, dtype=np.int64))


class Graph:
    """Immutable undirected graph in CSR form.

    Invariants (established by the constructors, assumed everywhere):
    symmetric adjacency, no self-loops, no duplicate edges, neighbor lists
    sorted ascending, ``degrees.sum() == 2*m == total_volume``.
    """

    __slots__ = ("n", "m", "indptr", "indices", "degrees", "total_volume", "_csr")

    def __init__(self, indptr, indices):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.n = len(self.indptr) - 1
        self.degrees = np.diff(self.indptr)
        if len(self.indices) % 2 != 0:
            raise ValueError("directed edge count must be even (symmetric graph)")
        self.m = len(self.indices) // 2
        self.total_volume = 2 * self.m
        self._csr = None

    @classmethod
    def from_edges(cls, u, v, n: int | None = None) -> "Graph":
        """Build a graph from endpoint arrays of undirected edges.

        Self-loops are dropped and duplicate edges collapse. ``n`` defaults
        to ``max(id) + 1``; isolated ids below ``n`` are retained.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise ValueError("endpoint arrays must have equal length")
        if n is None:
            n = int(max(u.max(initial=-1), v.max(initial=-1))) + 1
        if len(u):
            if u.min(initial=0) < 0 or v.min(initial=0) < 0:
                raise ValueError("negative node id")
            if max(u.max(), v.max()) >= n:
                raise ValueError("node id out of range")
        keep = u != v
        u, v = u[keep], v[keep]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        if len(src):
            first = np.empty(len(src), dtype=bool)
            first[0] = True
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            src, dst = src[first], dst[first]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst)

    @classmethod
    def from_csr_matrix(cls, mat: sp.csr_matrix) -> "Graph":
        mat = mat.tocsr()
        mat.sort_indices()
        return cls(mat.indptr.astype(np.int64), mat.indices.astype(np.int64))

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def to_csr(self) -> sp.csr_matrix:
        """Adjacency matrix as a scipy CSR matrix (cached)."""
        if self._csr is None:
            data = np.ones(len(self.indices), dtype=np.float64)
            self._csr = sp.csr_matrix(
                (data, self.indices, self.indptr), shape=(self.n, self.n)
            )
        return self._csr

    def volume(self, nodes) -> int:
        return int(self.degrees[np.asarray(nodes, dtype=np.int64)].sum())

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        ncomp = csgraph.connected_components(
            self.to_csr(), directed=False, return_labels=False
        )
        return ncomp == 1

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def load_edge_list(path) -> tuple[Graph, IdMap]:
    """Load a whitespace-delimited edge list (SNAP convention).

    One ``u v`` pair per line; lines starting with ``#`` are comments; a
    third column (weights), if present, is ignored. Raw labels may be any
    non-negative integers and are densely relabeled in first-seen order.
    """
    raw_u, raw_v = [], []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) < 2:
                    raise DataError(f"{path}:{lineno}: expected two node ids")
                try:
                    a, b = int(parts[0]), int(parts[1])
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-integer node id in {parts[:2]}"
                    ) from None
                if a < 0 or b < 0:
                    raise DataError(f"{path}:{lineno}: negative node id")
                raw_u.append(a)
                raw_v.append(b)
    except OSError as exc:
        raise DataError(f"cannot read edge list {path}: {exc}") from exc
    if not raw_u:
        raise DataError(f"{path}: no edges found")

    tokens = np.empty(2 * len(raw_u), dtype=np.int64)
    tokens[0::2] = raw_u
    tokens[1::2] = raw_v
    # Dense ids in first-seen order.
    uniq, first_pos = np.unique(tokens, return_index=True)
    dense_to_raw = uniq[np.argsort(first_pos)]
    idmap = IdMap(dense_to_raw)
    lookup = idmap.raw_to_dense
    u = np.fromiter((lookup[a] for a in raw_u), dtype=np.int64, count=len(raw_u))
    v = np.fromiter((lookup[b] for b in raw_v), dtype=np.int64, count=len(raw_v))
    graph = Graph.from_edges(u, v, n=len(idmap))
    return graph, idmap


def induced_subgraph(g: Graph, nodes) -> tuple[Graph, IdMap]:
    """Subgraph induced on ``nodes``; keeps exactly the edges with both ends inside.

    Subgraph ids follow the order of the input list (which must be
    duplicate-free). The returned IdMap sends subgraph ids back to the
    parent's dense ids.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    if nodes.size == 0:
        raise ValueError("empty node set")
    if nodes.min() < 0 or nodes.max() >= g.n:
        raise ValueError("node id out of range")
    if len(np.unique(nodes)) != len(nodes):
        raise ValueError("duplicate nodes in subgraph selection")
    sub = g.to_csr()[nodes][:, nodes].tocsr()
    sub.sort_indices()
    return Graph.from_csr_matrix(sub), IdMap(nodes)


def extract_lcc(g: Graph, idmap: IdMap) -> tuple[Graph, IdMap]:
    """Graph induced on the largest connected component, densely relabeled.

    Ties between equal-size components are broken by the smallest raw label
    contained in the component, so extraction is deterministic.
    """
    if g.n == 0:
        raise DataError("empty graph")
    ncomp, labels = csgraph.connected_components(g.to_csr(), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    best = np.flatnonzero(sizes == sizes.max())
    if len(best) > 1:
        min_raw = [idmap.dense_to_raw[labels == c].min() for c in best]
        chosen = best[int(np.argmin(min_raw))]
    else:
        chosen = best[0]
    keep = np.flatnonzero(labels == chosen)
    sub, submap = induced_subgraph(g, keep)
    return sub, IdMap(idmap.dense_to_raw[submap.dense_to_raw])


@dataclass(frozen=True)
class CommunityStats:
    """Per-community statistics matching the dataset summary columns."""

    size: int
    avg_within_degree: float
    avg_within_ratio: float
    diameter: int


class CommunityTable:
    """Processed ground-truth communities over an LCC graph.

    Every stored community is connected as an induced subgraph and has at
    least ``min_size`` members (dense ids, sorted ascending).
    """

    def __init__(self, communities, stats, dropped_members=0, min_size=10):
        self.communities = [np.asarray(c, dtype=np.int64) for c in communities]
        self.stats = list(stats)
        self.dropped_members = dropped_members
        self.min_size = min_size

    def __len__(self):
        return len(self.communities)

    def summary(self) -> dict:
        """Dataset-level means of the per-community statistics."""
        if not self.communities:
            return {
                "n_communities": 0,
                "mean_size": float("nan"),
                "mean_within_degree": float("nan"),
                "mean_within_ratio": float("nan"),
                "mean_diameter": float("nan"),
            }
        return {
            "n_communities": len(self.communities),
            "mean_size": float(np.mean([s.size for s in self.stats])),
            "mean_within_degree": float(
                np.mean([s.avg_within_degree for s in self.stats])
            ),
            "mean_within_ratio": float(
                np.mean([s.avg_within_ratio for s in self.stats])
            ),
            "mean_diameter": float(np.mean([s.diameter for s in self.stats])),
        }


def _community_stats(g: Graph, members: np.ndarray, diameter: int) -> CommunityStats:
    sub, _ = induced_subgraph(g, members)
    within = sub.degrees.astype(np.float64)
    total = g.degrees[members].astype(np.float64)
    return CommunityStats(
        size=len(members),
        avg_within_degree=float(within.mean()),
        avg_within_ratio=float((within / total).mean()),
        diameter=diameter,
    )


def community_diameter(g: Graph, members) -> int:
    """Exact diameter of the induced subgraph via all-pairs BFS."""
    members = np.asarray(members, dtype=np.int64)
    sub, _ = induced_subgraph(g, members)
    if sub.n == 1:
        return 0
    dist = csgraph.shortest_path(sub.to_csr(), method="D", unweighted=True)
    if np.isinf(dist).any():
        raise ValueError("community is not connected as an induced subgraph")
    return int(dist.max())


def process_communities(g: Graph, idmap: IdMap, path, min_size: int = 10) -> CommunityTable:
    """Read a community file (one community per line, raw ids) and process it.

    Each raw community is restricted to members inside the LCC (members with
    unknown raw ids are dropped silently but counted), split into connected
    components of its induced subgraph, and each component is kept iff it has
    at least ``min_size`` nodes.
    """
    lookup = idmap.raw_to_dense
    dropped = 0
    kept_members: list[np.ndarray] = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read community file {path}: {exc}") from exc

    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        members = set()
        for tok in line.split():
            try:
                raw = int(tok)
            except ValueError:
                raise DataError(
                    f"{path}:{lineno}: non-integer community member {tok!r}"
                ) from None
            dense = lookup.get(raw)
            if dense is None:
                dropped += 1
            else:
                members.add(dense)
        if not members:
            continue
        members = np.array(sorted(members), dtype=np.int64)
        sub, submap = induced_subgraph(g, members)
        ncomp, labels = csgraph.connected_components(sub.to_csr(), directed=False)
        for c in range(ncomp):
            comp = submap.dense_to_raw[labels == c]
            if len(comp) >= min_size:
                kept_members.append(np.sort(comp))

    # Deterministic order: file order, then by smallest member id.
    stats = [
        _community_stats(g, mem, community_diameter(g, mem)) for mem in kept_members
    ]
    return CommunityTable(kept_members, stats, dropped_members=dropped, min_size=min_size)
