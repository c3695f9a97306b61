"""Locally-biased Fiedler vector: seeded spectral cuts on a (sub)graph.

Solves the seed-biased spectral program

    minimize x^T L x   subject to   x^T D x = 1,  x^T D 1 = 0,  (x^T D s)^2 >= kappa

whose solutions are parameterized by a shift gamma < lambda_2(L, D): x is
proportional to the solution of ``(L - gamma D) x = beta D s`` restricted to
the D-orthogonal complement of the constant vector. The seed vector s is the
dense, D-orthogonal, D-normalized signed indicator of the seed set. kappa is
not an input here; the value achieved by the gamma-shifted solve is reported.

The solve runs in the symmetrically normalized space z = D^{1/2} x, where the
operator is ``(I - D^-1/2 A D^-1/2) - gamma I``: conjugate gradients with
explicit deflation of the null direction D^{1/2} 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlgorithmError
from .graph import Graph
from .sweep import SweepResult, sweep

__all__ = ["MovSeedVector", "MovSolution", "mov_seed_vector", "mov_solve", "mov_cluster"]


@dataclass(frozen=True)
class MovSeedVector:
    """Dense seed vector s with s^T D 1 = 0 and s^T D s = 1."""

    values: np.ndarray


@dataclass(frozen=True)
class MovSolution:
    x: np.ndarray
    gamma: float
    kappa_achieved: float
    iterations: int
    residual_norm: float


def mov_seed_vector(g: Graph, seeds) -> MovSeedVector:
    """Build s = sqrt(vol(S) vol(S-bar) / vol(G)) (e_S/vol(S) - e_Sbar/vol(Sbar))."""
    seeds = np.asarray(seeds, dtype=np.int64)
    if seeds.size == 0 or seeds.size >= g.n:
        raise ValueError("seed set must be a nonempty proper subset")
    d = g.degrees.astype(np.float64)
    vol_g = float(g.total_volume)
    vol_s = float(d[seeds].sum())
    vol_sbar = vol_g - vol_s
    if vol_s == 0 or vol_sbar == 0:
        raise ValueError("both seed-side volumes must be positive")
    s = np.full(g.n, -1.0 / vol_sbar)
    s[seeds] = 1.0 / vol_s
    s *= np.sqrt(vol_s * vol_sbar / vol_g)
    # Construction guarantees these; verify to catch numeric degeneracy.
    if abs(float(s @ (d * s)) - 1.0) > 1e-10:
        raise AlgorithmError("seed vector lost D-normalization")
    if abs(float((d * s).sum())) > 1e-10 * vol_g:
        raise AlgorithmError("seed vector lost D-orthogonality to constants")
    return MovSeedVector(values=s)


def mov_solve(
    g: Graph,
    s: MovSeedVector,
    gamma: float = 0.0,
    tol: float = 1e-8,
    max_iter: int | None = None,
) -> MovSolution:
    """Solve the gamma-shifted seeded spectral system on a connected graph.

    Returns x scaled to x^T D x = 1 and sign-fixed to x^T D s > 0, with the
    relative residual of ``(L - gamma D) x = beta D s`` (beta recovered by
    least squares) at most ``tol``.
    """
    if not g.is_connected():
        raise ValueError("graph must be connected")
    n = g.n
    if max_iter is None:
        max_iter = 10 * n
    d = g.degrees.astype(np.float64)
    sqrt_d = np.sqrt(d)
    inv_sqrt_d = 1.0 / sqrt_d
    adj = g.to_csr()

    q = sqrt_d  # D^{1/2} 1, the null direction of the normalized Laplacian
    q_norm2 = float(q @ q)
    w = sqrt_d * s.values  # D^{1/2} s, RHS in z-space

    def op(z):
        return (1.0 - gamma) * z - inv_sqrt_d * (adj @ (inv_sqrt_d * z))

    def deflate(z):
        return z - (float(q @ z) / q_norm2) * q

    w = deflate(w)
    w_norm = float(np.linalg.norm(w))
    if w_norm == 0.0:
        raise AlgorithmError("seed vector is entirely in the constant direction")

    # CG on the positive definite restriction to the complement of q.
    z = np.zeros(n)
    r = w.copy()
    p = r.copy()
    rs = float(r @ r)
    # Solve well past the reporting tolerance; the D^{1/2} change of basis
    # can inflate the x-space relative residual.
    target = (tol * 1e-3) * w_norm
    iterations = 0
    while np.sqrt(rs) > target:
        if iterations >= max_iter:
            raise AlgorithmError(
                f"no convergence in {max_iter} iterations (gamma too close to lambda_2?)"
            )
        ap = deflate(op(p))
        pap = float(p @ ap)
        if pap <= 0.0:
            raise AlgorithmError(
                "indefinite system encountered (gamma >= lambda_2)"
            )
        alpha = rs / pap
        z += alpha * p
        r -= alpha * ap
        r = deflate(r)
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        iterations += 1
        rs = rs_new

    z = deflate(z)
    z /= float(np.linalg.norm(z))
    if float(z @ w) < 0:
        z = -z
    x = inv_sqrt_d * z

    ds = d * s.values
    mx = _apply_shifted_laplacian(g, x, gamma)
    beta = float(ds @ mx) / float(ds @ ds)
    residual = float(np.linalg.norm(mx - beta * ds)) / abs(beta) / float(
        np.linalg.norm(ds)
    )
    if residual > tol:
        raise AlgorithmError(f"residual {residual:.3e} above tolerance {tol:.3e}")
    kappa = float(x @ ds) ** 2
    return MovSolution(
        x=x,
        gamma=gamma,
        kappa_achieved=kappa,
        iterations=iterations,
        residual_norm=residual,
    )


def _apply_shifted_laplacian(g: Graph, x: np.ndarray, gamma: float) -> np.ndarray:
    d = g.degrees.astype(np.float64)
    return d * x - g.to_csr() @ x - gamma * (d * x)


def mov_cluster(g: Graph, seeds, gamma: float = 0.0, tol: float = 1e-8) -> SweepResult:
    """Sweep the seeded spectral vector (descending, seed side first)."""
    sol = mov_solve(g, mov_seed_vector(g, seeds), gamma=gamma, tol=tol)
    order = np.lexsort((np.arange(g.n), -sol.x))
    return sweep(g, order)
