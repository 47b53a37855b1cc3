"""Numba-compiled contiguous Ward agglomeration (hot path).

Mirrors soskit._cluster_numpy.cluster_contiguous_ward; kept in explicit
loops so the whole merge loop stays inside one @njit function.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _ward(sums, size, s1, s2):
    C = sums.shape[1]
    acc = 0.0
    for c in range(C):
        d = sums[s1, c] / size[s1] - sums[s2, c] / size[s2]
        acc += d * d
    delta = size[s1] * size[s2] / (size[s1] + size[s2]) * acc
    return np.sqrt(2.0 * delta)


@njit(cache=True)
def _cluster(X):
    T = X.shape[0]
    sums = X.copy()
    size = np.ones(T, dtype=np.int64)
    node = np.arange(T)
    nxt = np.empty(T + 1, dtype=np.int64)
    prv = np.empty(T + 1, dtype=np.int64)
    for b in range(T + 1):
        nxt[b] = b + 1
        prv[b] = b - 1

    cost = np.full(T + 1, np.inf)
    for b in range(1, T):
        cost[b] = _ward(sums, size, b - 1, b)

    left = np.empty(T - 1, dtype=np.int64)
    right = np.empty(T - 1, dtype=np.int64)
    dist = np.empty(T - 1)
    boundary = np.empty(T - 1, dtype=np.int64)
    for k in range(T - 1):
        b = 1
        best = cost[1]
        for i in range(2, T):
            if cost[i] < best:
                best = cost[i]
                b = i
        p = prv[b]
        n = nxt[b]
        left[k] = node[p]
        right[k] = node[b]
        dist[k] = cost[b]
        boundary[k] = b
        node[p] = T + k
        size[p] += size[b]
        for c in range(X.shape[1]):
            sums[p, c] += sums[b, c]
        nxt[p] = n
        prv[n] = p
        cost[b] = np.inf
        if p > 0:
            cost[p] = _ward(sums, size, prv[p], p)
        if n < T:
            cost[n] = _ward(sums, size, p, n)
    return left, right, dist, boundary


def cluster_contiguous_ward(X: np.ndarray):
    return _cluster(np.ascontiguousarray(X, dtype=np.float64))
