"""Pure-Python implementations of the hot inner loops.

These are the fallback for (and the reference semantics of) the compiled
kernels in ``_kernels_cy``. Both backends perform the same floating point
operations in the same order, so their outputs are bit-identical.

All kernels work on the CSR arrays of a graph (``indptr``, ``indices``) and
dense work vectors; callers convert to/from sparse form.
"""

from collections import deque

import numpy as np

BACKEND_NAME = "python"


def ppr_push_csr(indptr, indices, degrees, seed_nodes, seed_weights, alpha, epsilon,
                 on_push=None):
    """Personalized PageRank via FIFO residual push.

    Maintains the invariant x + ppr(alpha, r) = ppr(alpha, p0) and pushes
    nodes while r(v) >= epsilon * d(v). A push at u moves (1-alpha)*r(u) to
    the estimate and spreads alpha*r(u)/d(u) to each neighbor. Degree-zero
    nodes never push (their residual mass is stuck by convention).

    ``on_push`` (this backend only) is called with dense snapshot arrays
    (x, r) after every push, for instrumented invariant checks.

    Returns dense (x, r, push_count).
    """
    n = len(degrees)
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    deg = degrees.tolist()
    x = [0.0] * n
    r = [0.0] * n
    in_queue = bytearray(n)
    queue = deque()
    one_minus_alpha = 1.0 - alpha

    for node, weight in zip(seed_nodes.tolist(), seed_weights.tolist()):
        r[node] += weight
    for node in seed_nodes.tolist():
        if deg[node] > 0 and r[node] >= epsilon * deg[node] and not in_queue[node]:
            queue.append(node)
            in_queue[node] = 1

    pushes = 0
    while queue:
        u = queue.popleft()
        in_queue[u] = 0
        ru = r[u]
        du = deg[u]
        if ru < epsilon * du:
            continue
        x[u] += one_minus_alpha * ru
        r[u] = 0.0
        share = alpha * ru / du
        for i in range(indptr_l[u], indptr_l[u + 1]):
            v = indices_l[i]
            rv = r[v] + share
            r[v] = rv
            if not in_queue[v]:
                dv = deg[v]
                if dv > 0 and rv >= epsilon * dv:
                    queue.append(v)
                    in_queue[v] = 1
        pushes += 1
        if on_push is not None:
            on_push(np.array(x), np.array(r))

    return (
        np.array(x, dtype=np.float64),
        np.array(r, dtype=np.float64),
        pushes,
    )


def hk_push_csr(indptr, indices, degrees, seed_nodes, seed_weights, coeffs, thresholds):
    """Heat-kernel diffusion via leveled FIFO residual push.

    ``coeffs[k] = exp(-t) * t^k / k!`` for k = 0..N are the Taylor weights
    and ``thresholds[k]`` is the per-degree push threshold of level k.
    The state invariant is

        x_exact_N = x + sum_k M_k r_k,   M_k = sum_{j>=k} coeffs[j] P^{j-k}

    and a push at (u, k) converts coeffs[k]*r into estimate mass while
    spreading r/d(u) to the neighbors at level k+1. Level-N residuals are
    flushed exactly at the end (M_N is diagonal), so only levels < N queue.

    Returns dense (x, push_count).
    """
    n = len(degrees)
    levels = len(coeffs)  # N + 1
    top = levels - 1
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    deg = degrees.tolist()
    coeffs_l = list(coeffs)
    thresh_l = list(thresholds)

    x = [0.0] * n
    rlev = [[0.0] * n for _ in range(levels)]
    in_queue = [bytearray(n) for _ in range(levels)]
    queue = deque()

    r0 = rlev[0]
    for node, weight in zip(seed_nodes.tolist(), seed_weights.tolist()):
        r0[node] += weight
    if top > 0:
        for node in seed_nodes.tolist():
            if deg[node] > 0 and r0[node] >= thresh_l[0] * deg[node] and not in_queue[0][node]:
                queue.append((node, 0))
                in_queue[0][node] = 1

    pushes = 0
    while queue:
        u, k = queue.popleft()
        in_queue[k][u] = 0
        rk = rlev[k]
        ru = rk[u]
        du = deg[u]
        if ru < thresh_l[k] * du:
            continue
        rk[u] = 0.0
        x[u] += coeffs_l[k] * ru
        share = ru / du
        knext = k + 1
        rnext = rlev[knext]
        if knext < top:
            inq = in_queue[knext]
            tnext = thresh_l[knext]
            for i in range(indptr_l[u], indptr_l[u + 1]):
                v = indices_l[i]
                rv = rnext[v] + share
                rnext[v] = rv
                if not inq[v]:
                    dv = deg[v]
                    if dv > 0 and rv >= tnext * dv:
                        queue.append((v, knext))
                        inq[v] = 1
        else:
            for i in range(indptr_l[u], indptr_l[u + 1]):
                v = indices_l[i]
                rnext[v] += share
        pushes += 1

    # Exact flush of the top level: M_N = coeffs[N] * I.
    xv = np.array(x, dtype=np.float64)
    xv += coeffs_l[top] * np.array(rlev[top], dtype=np.float64)
    return xv, pushes


def sweep_profile_csr(indptr, indices, degrees, order, total_volume):
    """Conductance of every prefix of ``order``, computed incrementally.

    The running cut is updated per added node by counting neighbors already
    inside the prefix; cost is O(volume of the order). Prefixes covering all
    n nodes are never evaluated (the caller truncates), and a prefix whose
    smaller side has zero volume gets conductance +inf.

    Returns a float64 profile of length len(order).
    """
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    deg = degrees.tolist()
    n = len(deg)
    in_set = bytearray(n)
    profile = np.empty(len(order), dtype=np.float64)
    cut = 0
    vol = 0
    for i, u in enumerate(order.tolist()):
        du = deg[u]
        inside = 0
        for j in range(indptr_l[u], indptr_l[u + 1]):
            if in_set[indices_l[j]]:
                inside += 1
        cut += du - 2 * inside
        vol += du
        in_set[u] = 1
        denom = min(vol, total_volume - vol)
        profile[i] = cut / denom if denom > 0 else np.inf
    return profile
