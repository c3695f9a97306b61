"""Iterative seed-stack community detection on an extracted subgraph.

The algorithm extracts a subgraph around the seed, then grows a stack of
nodes over r rounds: at round j the current stack's indicator is diffused
by three steps of the normalized walk matrix Abar and the top j*f non-member
nodes are pushed (largest score first). The final sweep order is the stack
in push order followed by the remaining subgraph nodes sorted by the final
walk vector; the best-conductance prefix is the detected community.
"""

from __future__ import annotations

import numpy as np

from .diffusion import abar_power_indicator
from .extract import ExtractionSpec, extract
from .graph import Graph
from .sweep import SweepResult, sweep, sweep_in_parent

__all__ = ["SeedStack", "augment_step", "lemoneasy"]


class SeedStack:
    """Duplicate-free node stack in push order; the original seed is first."""

    def __init__(self, seed: int):
        self._order: list[int] = [int(seed)]
        self._members: set[int] = {int(seed)}

    def __len__(self):
        return len(self._order)

    def __contains__(self, node):
        return int(node) in self._members

    @property
    def order(self) -> np.ndarray:
        return np.array(self._order, dtype=np.int64)

    @property
    def members(self) -> frozenset:
        return frozenset(self._members)

    def push(self, node: int):
        node = int(node)
        if node in self._members:
            raise ValueError(f"node {node} already on the stack")
        self._order.append(node)
        self._members.add(node)


def augment_step(g_s: Graph, stack: SeedStack, count: int) -> SeedStack:
    """Push the top ``count`` non-member nodes of z = Abar^3 e_stack.

    Candidates are ranked by descending z (ties by ascending id) and must
    have nonzero score; fewer nodes are pushed when the reachable subgraph
    is exhausted. The stack is modified in place and returned.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0 or len(stack) == g_s.n:
        return stack
    z = abar_power_indicator(g_s, stack.order, 3)
    candidates = np.flatnonzero(z > 0.0)
    candidates = candidates[[c not in stack for c in candidates]]
    if len(candidates) == 0:
        return stack
    ranked = candidates[np.lexsort((candidates, -z[candidates]))]
    for node in ranked[:count]:
        stack.push(node)
    return stack


def lemoneasy(
    g: Graph,
    seed: int,
    r: int = 10,
    f: int = 5,
    spec: ExtractionSpec | None = None,
    parent_sweep: bool = False,
) -> tuple[SweepResult, SeedStack]:
    """Run the full pipeline from a single seed on the full graph.

    Returns the sweep result and the seed stack, both in parent-graph ids.
    The sweep uses subgraph volumes by default; ``parent_sweep`` measures
    cut and volume in the full graph instead.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if f < 1:
        raise ValueError("f must be >= 1")
    if not (0 <= seed < g.n):
        raise ValueError(f"invalid seed {seed}")
    if spec is None:
        spec = ExtractionSpec(method="ppr_adaptive")

    ext = extract(g, seed, spec)
    g_s = ext.subgraph
    to_parent = ext.id_map.dense_to_raw
    sub_seed = ext.parent_to_sub(seed)

    stack = SeedStack(sub_seed)
    for j in range(r + 1):
        augment_step(g_s, stack, j * f)

    z_final = abar_power_indicator(g_s, stack.order, 3)
    remaining = np.setdiff1d(np.arange(g_s.n, dtype=np.int64), stack.order)
    remaining = remaining[np.lexsort((remaining, -z_final[remaining]))]
    sub_order = np.concatenate([stack.order, remaining])

    if parent_sweep:
        result = sweep_in_parent(g, to_parent[sub_order])
    else:
        sub_result = sweep(g_s, sub_order)
        result = SweepResult(
            order=to_parent[sub_result.order],
            profile=sub_result.profile,
            prefix_index=sub_result.prefix_index,
        )

    parent_stack = SeedStack(seed)
    for node in stack.order[1:]:
        parent_stack.push(int(to_parent[node]))
    return result, parent_stack
