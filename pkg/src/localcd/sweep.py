"""Conductance, sweep cuts, and cluster-quality metrics.

The sweep procedure walks a node ordering, maintains the running cut and
volume incrementally, and returns the minimum-conductance prefix. Ties
across prefixes are broken toward the shortest prefix, and the all-nodes
prefix is never evaluated (its complement has zero volume).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph

__all__ = [
    "SweepResult",
    "conductance",
    "sweep",
    "sweep_in_parent",
    "precision",
    "f1",
]


@dataclass(frozen=True)
class SweepResult:
    """Best-conductance prefix of a node ordering plus the full profile."""

    order: np.ndarray
    profile: np.ndarray
    prefix_index: int  # best_prefix == order[: prefix_index + 1]

    @property
    def best_prefix(self) -> np.ndarray:
        return self.order[: self.prefix_index + 1]

    @property
    def best_conductance(self) -> float:
        return float(self.profile[self.prefix_index])


def conductance(g: Graph, nodes) -> float:
    """phi(C) = cut(C, C-bar) / min(vol(C), vol(C-bar)).

    ``nodes`` must be a nonempty proper subset of the vertices with both
    side volumes positive.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    if nodes.size == 0:
        raise ValueError("empty node set")
    if len(np.unique(nodes)) != len(nodes):
        raise ValueError("duplicate nodes")
    if nodes.size >= g.n:
        raise ValueError("node set must be a proper subset")
    mask = np.zeros(g.n, dtype=bool)
    mask[nodes] = True
    vol = int(g.degrees[nodes].sum())
    other = g.total_volume - vol
    if vol == 0 or other == 0:
        raise ValueError("both side volumes must be positive")
    # internal counts each inside edge twice, so cut = vol - internal.
    nbrs = np.concatenate([g.neighbors(u) for u in nodes]) if nodes.size else nodes
    internal = int(mask[nbrs].sum())
    cut = vol - internal
    return cut / min(vol, other)


def _validate_order(g: Graph, order) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    if order.size == 0:
        raise ValueError("empty sweep order")
    if order.min() < 0 or order.max() >= g.n:
        raise ValueError("node id out of range")
    if len(np.unique(order)) != len(order):
        raise ValueError("duplicate nodes in sweep order")
    return order


def sweep(g: Graph, order) -> SweepResult:
    """Minimum-conductance prefix of ``order`` (prefix lengths 1..n-1)."""
    order = _validate_order(g, order)
    limit = min(len(order), g.n - 1)
    if limit == 0:
        raise ValueError("no sweepable prefix (order covers the whole graph)")
    evaluated = order[:limit]
    profile = _kernels.sweep_profile_csr(
        g.indptr, g.indices, g.degrees, evaluated, g.total_volume
    )
    best = int(np.argmin(profile))  # first minimum = shortest prefix
    return SweepResult(order=evaluated, profile=profile, prefix_index=best)


def sweep_in_parent(g_parent: Graph, order) -> SweepResult:
    """Sweep an ordering (e.g. from a subgraph) with parent-graph cut/volume."""
    return sweep(g_parent, order)


def precision(t, truth) -> float:
    """|C intersect T| / |T|."""
    t = set(np.asarray(t).tolist())
    if not t:
        raise ValueError("empty candidate set")
    truth = set(np.asarray(truth).tolist())
    return len(t & truth) / len(t)


def f1(t, truth) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    truth = set(np.asarray(truth).tolist())
    if not truth:
        raise ValueError("empty ground-truth set")
    t = set(np.asarray(t).tolist())
    inter = len(t & truth)
    p = inter / len(t) if t else 0.0
    r = inter / len(truth)
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)
