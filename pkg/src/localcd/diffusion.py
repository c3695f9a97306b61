"""Diffusion vectors: k-step walks, personalized PageRank, heat kernel.

All diffusions start from a seed distribution p0 and have the form
``sum_k c_k P^k p0`` with P = A D^-1 (column stochastic). PPR uses
``c_k = (1-alpha) alpha^k`` and the heat kernel ``c_k = exp(-t) t^k / k!``;
both are approximated by local push algorithms whose error is measured in
the degree-weighted infinity norm ``||D^-1 (exact - approx)||_inf < eps``.

k-walk vectors are computed exactly, either over P (plain mode) or over the
self-loop-normalized matrix ``Abar = (D+I)^-1/2 (A+I) (D+I)^-1/2`` applied
to the plain indicator of the seed set (normalized mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AlgorithmError
from .graph import Graph

__all__ = [
    "SeedDistribution",
    "DiffusionSpec",
    "SparseVec",
    "kwalk_vector",
    "ppr_push",
    "hk_push",
    "degree_normalize",
    "top_k",
    "compute_diffusion",
    "abar_multiply",
    "abar_power_indicator",
    "hk_taylor_terms",
]


@dataclass(frozen=True)
class SeedDistribution:
    """Initial probability distribution p0 over a seed set.

    Degree-weighted mode assigns d(v)/vol(S); uniform mode 1/|S|. Weights
    always sum to one.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mode: str

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=np.int64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if len(nodes) == 0:
            raise ValueError("empty seed set")
        if len(np.unique(nodes)) != len(nodes):
            raise ValueError("duplicate seed nodes")
        if not math.isclose(float(weights.sum()), 1.0, rel_tol=1e-9):
            raise ValueError("seed weights must sum to 1")

    @classmethod
    def degree_weighted(cls, g: Graph, nodes) -> "SeedDistribution":
        nodes = np.asarray(nodes, dtype=np.int64)
        vol = g.degrees[nodes].sum()
        if vol <= 0:
            raise ValueError("seed set has zero volume")
        return cls(nodes, g.degrees[nodes] / vol, "degree")

    @classmethod
    def uniform(cls, nodes) -> "SeedDistribution":
        nodes = np.asarray(nodes, dtype=np.int64)
        if len(nodes) == 0:
            raise ValueError("empty seed set")
        return cls(nodes, np.full(len(nodes), 1.0 / len(nodes)), "uniform")

    def to_dense(self, n: int) -> np.ndarray:
        p0 = np.zeros(n, dtype=np.float64)
        p0[self.nodes] = self.weights
        return p0


_KINDS = {"kwalk", "ppr", "hk"}


@dataclass(frozen=True)
class DiffusionSpec:
    """Which diffusion to run plus its parameters.

    Exactly the parameters of the chosen kind may be set: ``k`` for kwalk
    (with the ``normalized`` mode flag), ``alpha``/``epsilon`` for ppr,
    ``t``/``epsilon`` for hk.
    """

    kind: str
    k: int | None = None
    alpha: float | None = None
    t: float | None = None
    epsilon: float | None = None
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown diffusion kind {self.kind!r}")
        if self.kind == "kwalk":
            if self.k is None or self.k < 0:
                raise ValueError("kwalk requires k >= 0")
            if self.alpha is not None or self.t is not None or self.epsilon is not None:
                raise ValueError("kwalk takes only k")
        elif self.kind == "ppr":
            if self.alpha is None or not (0.0 < self.alpha < 1.0):
                raise ValueError("ppr requires alpha in (0, 1)")
            if self.epsilon is None or self.epsilon <= 0:
                raise ValueError("ppr requires epsilon > 0")
            if self.k is not None or self.t is not None or self.normalized:
                raise ValueError("ppr takes only alpha and epsilon")
        else:
            if self.t is None or self.t < 0:
                raise ValueError("hk requires t >= 0")
            if self.epsilon is None or self.epsilon <= 0:
                raise ValueError("hk requires epsilon > 0")
            if self.k is not None or self.alpha is not None or self.normalized:
                raise ValueError("hk takes only t and epsilon")

    @classmethod
    def kwalk(cls, k: int, normalized: bool = False) -> "DiffusionSpec":
        return cls("kwalk", k=k, normalized=normalized)

    @classmethod
    def ppr(cls, alpha: float = 0.99, epsilon: float = 1e-4) -> "DiffusionSpec":
        return cls("ppr", alpha=alpha, epsilon=epsilon)

    @classmethod
    def hk(cls, t: float = 4.0, epsilon: float = 1e-4) -> "DiffusionSpec":
        return cls("hk", t=t, epsilon=epsilon)

    def label(self) -> str:
        if self.kind == "kwalk":
            return f"kwalk{self.k}"
        if self.kind == "ppr":
            return f"ppr(alpha={self.alpha},eps={self.epsilon:g})"
        return f"hk(t={self.t},eps={self.epsilon:g})"


@dataclass(frozen=True)
class SparseVec:
    """Sparse node -> score map; stores only nonzero entries, ids ascending."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)
        if len(indices) != len(values):
            raise ValueError("indices/values length mismatch")
        if len(indices) > 1 and (np.diff(indices) <= 0).any():
            order = np.argsort(indices, kind="stable")
            object.__setattr__(self, "indices", indices[order])
            object.__setattr__(self, "values", values[order])

    @classmethod
    def from_dense(cls, x: np.ndarray) -> "SparseVec":
        idx = np.flatnonzero(x)
        return cls(idx.astype(np.int64), x[idx].astype(np.float64))

    def to_dense(self, n: int) -> np.ndarray:
        x = np.zeros(n, dtype=np.float64)
        x[self.indices] = self.values
        return x

    @property
    def support(self) -> np.ndarray:
        return self.indices

    def __len__(self):
        return len(self.indices)

    def sum(self) -> float:
        return float(self.values.sum())

    def get(self, node: int) -> float:
        i = np.searchsorted(self.indices, node)
        if i < len(self.indices) and self.indices[i] == node:
            return float(self.values[i])
        return 0.0


def _walk_multiply(g: Graph, x: np.ndarray) -> np.ndarray:
    """One step of P = A D^-1 applied to x (zero-degree columns absorb)."""
    scaled = np.where(g.degrees > 0, x / np.maximum(g.degrees, 1), 0.0)
    return g.to_csr() @ scaled


def abar_multiply(g: Graph, x: np.ndarray) -> np.ndarray:
    """One step of Abar = (D+I)^-1/2 (A+I) (D+I)^-1/2 applied to x."""
    scale = 1.0 / np.sqrt(g.degrees + 1.0)
    sx = scale * x
    return scale * (g.to_csr() @ sx + sx)


def abar_power_indicator(g: Graph, nodes, k: int = 3) -> np.ndarray:
    """Dense Abar^k e_S for the plain (unnormalized) indicator of ``nodes``."""
    z = np.zeros(g.n, dtype=np.float64)
    z[np.asarray(nodes, dtype=np.int64)] = 1.0
    for _ in range(k):
        z = abar_multiply(g, z)
    return z


def kwalk_vector(g: Graph, seeds: SeedDistribution, k: int, normalized: bool = False) -> SparseVec:
    """Exact k-step walk vector: P^k p0, or Abar^k e_S in normalized mode."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if normalized:
        x = abar_power_indicator(g, seeds.nodes, k)
    else:
        x = seeds.to_dense(g.n)
        for _ in range(k):
            x = _walk_multiply(g, x)
    return SparseVec.from_dense(x)


def ppr_push(g: Graph, seeds: SeedDistribution, alpha: float, epsilon: float) -> tuple[SparseVec, SparseVec]:
    """Personalized PageRank estimate and residual via local push.

    On return every node satisfies r(v) < epsilon * d(v), which implies
    ``||D^-1 (ppr_exact - x)||_inf < epsilon``; the estimate never exceeds
    the exact vector entrywise.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must be in (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    x, r, _ = _kernels.ppr_push_csr(
        g.indptr,
        g.indices,
        g.degrees,
        seeds.nodes,
        seeds.weights,
        float(alpha),
        float(epsilon),
    )
    return SparseVec.from_dense(x), SparseVec.from_dense(r)


def hk_taylor_terms(t: float, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """Taylor weights and per-level push thresholds for the heat kernel.

    Picks the smallest N whose tail ``exp(-t) sum_{k>N} t^k/k!`` is below
    epsilon/2, then budgets the other epsilon/2 across levels: level k may
    leave residual up to ``eps / (2 (N+1) S_k)`` per unit degree, where
    ``S_k = sum_{j>=k} c_j`` bounds how much a level-k residual can still
    contribute to the output.
    """
    coeffs = [math.exp(-t)]
    acc = coeffs[0]
    k = 0
    while 1.0 - acc >= 0.5 * epsilon:
        k += 1
        coeffs.append(coeffs[-1] * t / k)
        acc += coeffs[-1]
        if k > 100_000:
            raise AlgorithmError("heat-kernel Taylor degree did not converge")
    coeffs = np.array(coeffs, dtype=np.float64)
    suffix = np.cumsum(coeffs[::-1])[::-1]
    thresholds = epsilon / (2.0 * len(coeffs) * suffix)
    return coeffs, thresholds


def hk_push(g: Graph, seeds: SeedDistribution, t: float, epsilon: float) -> SparseVec:
    """Heat-kernel diffusion estimate via leveled local push.

    Satisfies ``||D^-1 (hk_exact - x)||_inf < epsilon``; work is bounded in
    terms of t and epsilon only, independent of graph size.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if t == 0.0:
        return SparseVec(seeds.nodes.copy(), seeds.weights.copy())
    coeffs, thresholds = hk_taylor_terms(t, epsilon)
    x, _ = _kernels.hk_push_csr(
        g.indptr,
        g.indices,
        g.degrees,
        seeds.nodes,
        seeds.weights,
        coeffs,
        thresholds,
    )
    return SparseVec.from_dense(x)


def degree_normalize(g: Graph, vec: SparseVec, plus_one: bool = False) -> SparseVec:
    """Divide each node's score by the node's degree.

    ``plus_one`` divides by d(v)+1 instead, matching the self-loop-augmented
    degree of the normalized walk matrix; plain d(v) is the default for all
    diffusion kinds.
    """
    deg = g.degrees[vec.indices] + (1 if plus_one else 0)
    if (deg == 0).any():
        raise ValueError("zero-degree node in support")
    return SparseVec(vec.indices, vec.values / deg)


def top_k(vec: SparseVec, k: int) -> np.ndarray:
    """Up to k support nodes by descending score, ties by ascending id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = np.lexsort((vec.indices, -vec.values))
    return vec.indices[order[: min(k, len(order))]]


def compute_diffusion(g: Graph, seeds: SeedDistribution, spec: DiffusionSpec) -> SparseVec:
    """Run the diffusion described by ``spec`` from ``seeds``."""
    if spec.kind == "kwalk":
        return kwalk_vector(g, seeds, spec.k, normalized=spec.normalized)
    if spec.kind == "ppr":
        x, _ = ppr_push(g, seeds, spec.alpha, spec.epsilon)
        return x
    return hk_push(g, seeds, spec.t, spec.epsilon)
