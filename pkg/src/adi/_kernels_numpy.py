"""Pure-numpy implementations of the numeric kernels.

Reference implementations: every function here has a numba twin in
``_kernels_numba`` that must produce identical results (bit-identical for
the integer kernels, same math for the float ones).
"""

import numpy as np

BACKEND_NAME = "numpy"


def build_suffix_array(codes: np.ndarray) -> np.ndarray:
    """Suffix array of ``codes`` (uint8) by prefix doubling, O(n log^2 n).

    Returns the int64 permutation of start offsets sorted by lexicographic
    suffix order.  Shorter suffixes sort before their extensions (past-end
    ranks lowest), so the result is unique and backend-independent.
    """
    n = codes.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    # dense initial ranks keep every combined key below (n+1)^2
    present = np.zeros(256, dtype=np.int64)
    present[codes] = 1
    rank_of_byte = np.cumsum(present) - 1
    rank = rank_of_byte[codes]
    base = n + 1
    k = 1
    while True:
        nxt = np.zeros(n, dtype=np.int64)
        nxt[: n - k] = rank[k:] + 1
        key = rank * base + nxt
        sa = np.argsort(key, kind="stable")
        skey = key[sa]
        steps = np.empty(n, dtype=np.int64)
        steps[0] = 0
        np.cumsum((skey[1:] != skey[:-1]).astype(np.int64), out=steps[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = steps
        if steps[-1] == n - 1:
            return sa
        k *= 2


def _suffix_cmp(text: np.ndarray, start: int, pattern: np.ndarray) -> int:
    # Compare suffix text[start:] against pattern over at most len(pattern)
    # bytes; a suffix that runs out while still equal is the smaller one.
    m = pattern.size
    seg = text[start : start + m]
    k = seg.size
    if k:
        mism = np.nonzero(seg != pattern[:k])[0]
        if mism.size:
            i = mism[0]
            return -1 if seg[i] < pattern[i] else 1
    return -1 if k < m else 0


def pattern_range(text: np.ndarray, sa: np.ndarray, pattern: np.ndarray):
    """Half-open range [lo, hi) of suffixes having ``pattern`` as prefix.

    Two binary searches over the suffix array; O(|pattern| log n) byte
    comparisons.  hi - lo is the occurrence count.
    """
    n = sa.size
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if _suffix_cmp(text, int(sa[mid]), pattern) < 0:
            lo = mid + 1
        else:
            hi = mid
    left = lo
    hi = n
    while lo < hi:
        mid = (lo + hi) // 2
        if _suffix_cmp(text, int(sa[mid]), pattern) <= 0:
            lo = mid + 1
        else:
            hi = mid
    return left, lo


def logistic_stats(X: np.ndarray, y: np.ndarray, beta: np.ndarray):
    """Bernoulli log-likelihood, its gradient, and negated Hessian.

    Returns ``(ll, grad, neg_hess)`` for the unpenalized model
    ``P(y=1|x) = sigmoid(x . beta)``; the trainer adds the ridge terms.
    """
    z = X @ beta
    ll = float(np.sum(y * z - np.logaddexp(0.0, z)))
    p = np.empty_like(z)
    pos = z >= 0
    p[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    p[~pos] = ez / (1.0 + ez)
    grad = X.T @ (y - p)
    w = p * (1.0 - p)
    neg_hess = X.T @ (w[:, None] * X)
    return ll, grad, neg_hess
