"""Pure-numpy contiguous Ward agglomeration (fallback backend).

Same contract as the numba kernel: cluster frames 0..T-1 of feature matrix
X (T, C), merging only temporally adjacent clusters, always picking the
adjacent pair with minimum Ward cost (ties: earliest boundary). Reported
distances use the Euclidean-consistent convention sqrt(2 * delta) so two
singletons merge at their plain Euclidean distance.

Returns (left, right, dist, boundary): per merge step, the node ids of the
left/right children (leaves 0..T-1, internal T+k for step k), the merge
distance, and the first frame of the right child segment.
"""

import numpy as np


def cluster_contiguous_ward(X: np.ndarray):
    X = np.ascontiguousarray(X, dtype=np.float64)
    T = X.shape[0]
    sums = X.copy()  # indexed by cluster start frame
    size = np.ones(T, dtype=np.int64)
    node = np.arange(T, dtype=np.int64)
    nxt = np.arange(1, T + 2, dtype=np.int64)  # over boundaries 0..T
    prv = np.arange(-1, T + 1, dtype=np.int64)

    def ward(s1, s2):
        mu = sums[s1] / size[s1] - sums[s2] / size[s2]
        delta = size[s1] * size[s2] / (size[s1] + size[s2]) * float(mu @ mu)
        return np.sqrt(2.0 * delta)

    cost = np.full(T + 1, np.inf)
    for b in range(1, T):
        cost[b] = ward(b - 1, b)

    left = np.empty(T - 1, dtype=np.int64)
    right = np.empty(T - 1, dtype=np.int64)
    dist = np.empty(T - 1)
    boundary = np.empty(T - 1, dtype=np.int64)
    for k in range(T - 1):
        b = int(np.argmin(cost))
        p, n = prv[b], nxt[b]
        left[k], right[k], dist[k], boundary[k] = node[p], node[b], cost[b], b
        node[p] = T + k
        size[p] += size[b]
        sums[p] += sums[b]
        nxt[p] = n
        prv[n] = p
        cost[b] = np.inf
        if p > 0:
            cost[p] = ward(prv[p], p)
        if n < T:
            cost[n] = ward(p, n)
    return left, right, dist, boundary
