"""Numba-jitted implementations of the numeric kernels.

Same contracts as ``_kernels_numpy``; importing this module requires numba.
Kernels are cached on disk, so the JIT cost is paid once per machine.
"""

import numba
import numpy as np

BACKEND_NAME = "numba"


@numba.njit(cache=True)
def build_suffix_array(codes):
    # prefix doubling with counting sorts: O(n) per round, O(n log n) total
    n = codes.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    sa = np.zeros(n, dtype=np.int64)
    if n == 1:
        return sa
    cnt = np.zeros(257, dtype=np.int64)
    for i in range(n):
        cnt[codes[i] + 1] += 1
    for v in range(1, 257):
        cnt[v] += cnt[v - 1]
    for i in range(n):
        b = codes[i]
        sa[cnt[b]] = i
        cnt[b] += 1
    rank = np.empty(n, dtype=np.int64)
    rank[sa[0]] = 0
    classes = 1
    for j in range(1, n):
        if codes[sa[j]] != codes[sa[j - 1]]:
            classes += 1
        rank[sa[j]] = classes - 1
    second = np.empty(n, dtype=np.int64)
    new_rank = np.empty(n, dtype=np.int64)
    starts = np.empty(n + 1, dtype=np.int64)
    h = 1
    while classes < n:
        # suffixes whose second half is past the end sort first; the rest
        # inherit second-key order from the current suffix order
        p = 0
        for i in range(n - h, n):
            second[p] = i
            p += 1
        for j in range(n):
            if sa[j] >= h:
                second[p] = sa[j] - h
                p += 1
        # stable counting sort by first-key class
        for v in range(classes + 1):
            starts[v] = 0
        for i in range(n):
            starts[rank[i] + 1] += 1
        for v in range(1, classes + 1):
            starts[v] += starts[v - 1]
        for p in range(n):
            i = second[p]
            sa[starts[rank[i]]] = i
            starts[rank[i]] += 1
        new_rank[sa[0]] = 0
        classes = 1
        for j in range(1, n):
            a = sa[j - 1]
            b = sa[j]
            a2 = rank[a + h] if a + h < n else -1
            b2 = rank[b + h] if b + h < n else -1
            if rank[a] != rank[b] or a2 != b2:
                classes += 1
            new_rank[b] = classes - 1
        for i in range(n):
            rank[i] = new_rank[i]
        h <<= 1
    return sa


@numba.njit(cache=True)
def _suffix_cmp(text, start, pattern):
    tlen = text.shape[0]
    m = pattern.shape[0]
    for j in range(m):
        i = start + j
        if i >= tlen:
            return -1
        a = text[i]
        b = pattern[j]
        if a < b:
            return -1
        if a > b:
            return 1
    return 0


@numba.njit(cache=True)
def pattern_range(text, sa, pattern):
    n = sa.shape[0]
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if _suffix_cmp(text, sa[mid], pattern) < 0:
            lo = mid + 1
        else:
            hi = mid
    left = lo
    hi = n
    while lo < hi:
        mid = (lo + hi) // 2
        if _suffix_cmp(text, sa[mid], pattern) <= 0:
            lo = mid + 1
        else:
            hi = mid
    return left, lo


@numba.njit(cache=True)
def logistic_stats(X, y, beta):
    n, d = X.shape
    grad = np.zeros(d, dtype=np.float64)
    neg_hess = np.zeros((d, d), dtype=np.float64)
    ll = 0.0
    for i in range(n):
        z = 0.0
        for j in range(d):
            z += X[i, j] * beta[j]
        if z >= 0.0:
            ll += y[i] * z - (z + np.log1p(np.exp(-z)))
            p = 1.0 / (1.0 + np.exp(-z))
        else:
            ll += y[i] * z - np.log1p(np.exp(z))
            ez = np.exp(z)
            p = ez / (1.0 + ez)
        r = y[i] - p
        w = p * (1.0 - p)
        for j in range(d):
            grad[j] += X[i, j] * r
            for l in range(j, d):
                neg_hess[j, l] += w * X[i, j] * X[i, l]
    for j in range(d):
        for l in range(j):
            neg_hess[j, l] = neg_hess[l, j]
    return ll, grad, neg_hess
