# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot inner loops.

Bit-identical to ``_kernels_py``: same float operations in the same order
(the extension is built with FP contraction disabled).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def ppr_push_csr(indptr, indices, degrees, seed_nodes, seed_weights,
                 double alpha, double epsilon):
    cdef cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] indices_v = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.int64_t[::1] deg_v = np.ascontiguousarray(degrees, dtype=np.int64)
    cdef cnp.int64_t[::1] seeds_v = np.ascontiguousarray(seed_nodes, dtype=np.int64)
    cdef cnp.float64_t[::1] weights_v = np.ascontiguousarray(seed_weights, dtype=np.float64)

    cdef Py_ssize_t n = deg_v.shape[0]
    x_arr = np.zeros(n, dtype=np.float64)
    r_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.float64_t[::1] x = x_arr
    cdef cnp.float64_t[::1] r = r_arr
    in_queue_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] in_queue = in_queue_arr
    queue_arr = np.empty(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr

    cdef double one_minus_alpha = 1.0 - alpha
    cdef Py_ssize_t head = 0, tail = 0, cap = n + 1
    cdef Py_ssize_t i, j
    cdef cnp.int64_t u, v, du, dv
    cdef double ru, rv, share
    cdef long long pushes = 0

    with nogil:
        for i in range(seeds_v.shape[0]):
            r[seeds_v[i]] += weights_v[i]
        for i in range(seeds_v.shape[0]):
            u = seeds_v[i]
            if deg_v[u] > 0 and r[u] >= epsilon * deg_v[u] and not in_queue[u]:
                queue[tail] = u
                tail = (tail + 1) % cap
                in_queue[u] = 1

        while head != tail:
            u = queue[head]
            head = (head + 1) % cap
            in_queue[u] = 0
            ru = r[u]
            du = deg_v[u]
            if ru < epsilon * du:
                continue
            x[u] += one_minus_alpha * ru
            r[u] = 0.0
            share = alpha * ru / du
            for j in range(indptr_v[u], indptr_v[u + 1]):
                v = indices_v[j]
                rv = r[v] + share
                r[v] = rv
                if not in_queue[v]:
                    dv = deg_v[v]
                    if dv > 0 and rv >= epsilon * dv:
                        queue[tail] = v
                        tail = (tail + 1) % cap
                        in_queue[v] = 1
            pushes += 1

    return x_arr, r_arr, int(pushes)


def hk_push_csr(indptr, indices, degrees, seed_nodes, seed_weights,
                coeffs, thresholds):
    cdef cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] indices_v = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.int64_t[::1] deg_v = np.ascontiguousarray(degrees, dtype=np.int64)
    cdef cnp.int64_t[::1] seeds_v = np.ascontiguousarray(seed_nodes, dtype=np.int64)
    cdef cnp.float64_t[::1] weights_v = np.ascontiguousarray(seed_weights, dtype=np.float64)
    cdef cnp.float64_t[::1] coeffs_v = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.float64_t[::1] thresh_v = np.ascontiguousarray(thresholds, dtype=np.float64)

    cdef Py_ssize_t n = deg_v.shape[0]
    cdef Py_ssize_t levels = coeffs_v.shape[0]
    cdef Py_ssize_t top = levels - 1

    x_arr = np.zeros(n, dtype=np.float64)
    rlev_arr = np.zeros((levels, n), dtype=np.float64)
    cdef cnp.float64_t[::1] x = x_arr
    cdef cnp.float64_t[:, ::1] rlev = rlev_arr
    in_queue_arr = np.zeros((levels, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] in_queue = in_queue_arr

    # Live queue entries are unique (node, level) pairs with level < top.
    cdef Py_ssize_t cap = n * (top if top > 0 else 1) + 1
    queue_nodes_arr = np.empty(cap, dtype=np.int64)
    queue_levels_arr = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] queue_nodes = queue_nodes_arr
    cdef cnp.int64_t[::1] queue_levels = queue_levels_arr

    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t i, j, k, knext
    cdef cnp.int64_t u, v, du, dv
    cdef double ru, rv, share, tnext
    cdef long long pushes = 0

    with nogil:
        for i in range(seeds_v.shape[0]):
            rlev[0, seeds_v[i]] += weights_v[i]
        if top > 0:
            for i in range(seeds_v.shape[0]):
                u = seeds_v[i]
                if deg_v[u] > 0 and rlev[0, u] >= thresh_v[0] * deg_v[u] and not in_queue[0, u]:
                    queue_nodes[tail] = u
                    queue_levels[tail] = 0
                    tail = (tail + 1) % cap
                    in_queue[0, u] = 1

        while head != tail:
            u = queue_nodes[head]
            k = queue_levels[head]
            head = (head + 1) % cap
            in_queue[k, u] = 0
            ru = rlev[k, u]
            du = deg_v[u]
            if ru < thresh_v[k] * du:
                continue
            rlev[k, u] = 0.0
            x[u] += coeffs_v[k] * ru
            share = ru / du
            knext = k + 1
            if knext < top:
                tnext = thresh_v[knext]
                for j in range(indptr_v[u], indptr_v[u + 1]):
                    v = indices_v[j]
                    rv = rlev[knext, v] + share
                    rlev[knext, v] = rv
                    if not in_queue[knext, v]:
                        dv = deg_v[v]
                        if dv > 0 and rv >= tnext * dv:
                            queue_nodes[tail] = v
                            queue_levels[tail] = knext
                            tail = (tail + 1) % cap
                            in_queue[knext, v] = 1
            else:
                for j in range(indptr_v[u], indptr_v[u + 1]):
                    v = indices_v[j]
                    rlev[knext, v] += share
            pushes += 1

    # Exact flush of the top level.
    x_arr += coeffs_v[top] * rlev_arr[top]
    return x_arr, int(pushes)


def sweep_profile_csr(indptr, indices, degrees, order, total_volume):
    cdef cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] indices_v = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.int64_t[::1] deg_v = np.ascontiguousarray(degrees, dtype=np.int64)
    cdef cnp.int64_t[::1] order_v = np.ascontiguousarray(order, dtype=np.int64)
    cdef long long total = total_volume

    cdef Py_ssize_t n = deg_v.shape[0]
    cdef Py_ssize_t length = order_v.shape[0]
    profile_arr = np.empty(length, dtype=np.float64)
    cdef cnp.float64_t[::1] profile = profile_arr
    in_set_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] in_set = in_set_arr

    cdef Py_ssize_t i, j
    cdef cnp.int64_t u, du
    cdef long long cut = 0, vol = 0, inside, denom, other
    cdef double inf = float("inf")

    with nogil:
        for i in range(length):
            u = order_v[i]
            du = deg_v[u]
            inside = 0
            for j in range(indptr_v[u], indptr_v[u + 1]):
                if in_set[indices_v[j]]:
                    inside += 1
            cut += du - 2 * inside
            vol += du
            in_set[u] = 1
            other = total - vol
            denom = vol if vol < other else other
            if denom > 0:
                profile[i] = (<double> cut) / (<double> denom)
            else:
                profile[i] = inf

    return profile_arr
