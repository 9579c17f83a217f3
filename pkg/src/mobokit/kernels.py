"""Hot numeric kernels with numba-accelerated and pure-numpy implementations.

The numba path is used by default when numba imports cleanly; set the
environment variable ``MOBOKIT_DISABLE_NUMBA=1`` to force the numpy fallback
(useful for debugging and as the baseline in ``benchmarks/bench_kernels.py``).
Both paths are exported with ``_np``/``_nb`` suffixes so they can be compared
directly; the unsuffixed names are the active selection.
"""

from __future__ import annotations

import math
import os

import numpy as np

_env = os.environ.get("MOBOKIT_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _env in ("1", "true", "yes", "on")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via MOBOKIT_DISABLE_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    njit = None
    NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def corr_matrix_np(X: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Gaussian correlation matrix exp(-sum_k theta_k (x_ik - x_jk)^2)."""
    sq = np.zeros((X.shape[0], X.shape[0]))
    for k in range(X.shape[1]):
        d = X[:, k, None] - X[None, :, k]
        sq += theta[k] * d * d
    return np.exp(-sq)


def cross_corr_np(Xq: np.ndarray, X: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Gaussian cross-correlation between query rows and training rows."""
    sq = np.zeros((Xq.shape[0], X.shape[0]))
    for k in range(X.shape[1]):
        d = Xq[:, k, None] - X[None, :, k]
        sq += theta[k] * d * d
    return np.exp(-sq)


def mixture_pdf_np(xs: np.ndarray, centers: np.ndarray, sigmas: np.ndarray,
                   coefs: np.ndarray) -> np.ndarray:
    """Evaluate sum_k coefs_k * exp(-0.5 ((x - c_k)/sigma_k)^2) at each x.

    ``coefs`` absorbs mixture weights, 1/(sigma*sqrt(2pi)) and the truncation
    renormalizer, so the result is the mixture density itself.
    """
    z = (xs[:, None] - centers[None, :]) / sigmas[None, :]
    return np.exp(-0.5 * z * z) @ coefs


def nondominated_ranks_np(F: np.ndarray) -> np.ndarray:
    """Front index per row of F (minimization), by iterative peeling."""
    n = F.shape[0]
    weak = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    strict = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dominates = weak & strict  # dominates[i, j]: i dominates j
    counts = dominates.sum(axis=0)
    ranks = np.full(n, -1, dtype=np.int64)
    rank = 0
    remaining = counts.copy()
    while np.any(ranks < 0):
        front = (remaining == 0) & (ranks < 0)
        ranks[front] = rank
        remaining = remaining - dominates[front].sum(axis=0)
        remaining[front] = -1
        rank += 1
    return ranks


# ---------------------------------------------------------------------------
# numba implementations (loop style; compiled lazily, cached on disk)
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @njit(cache=True)
    def corr_matrix_nb(X, theta):  # pragma: no cover - exercised via dispatch
        n, d = X.shape
        R = np.empty((n, n))
        for i in range(n):
            R[i, i] = 1.0
            for j in range(i + 1, n):
                s = 0.0
                for k in range(d):
                    diff = X[i, k] - X[j, k]
                    s += theta[k] * diff * diff
                v = math.exp(-s)
                R[i, j] = v
                R[j, i] = v
        return R

    @njit(cache=True)
    def cross_corr_nb(Xq, X, theta):  # pragma: no cover
        nq, d = Xq.shape
        n = X.shape[0]
        R = np.empty((nq, n))
        for i in range(nq):
            for j in range(n):
                s = 0.0
                for k in range(d):
                    diff = Xq[i, k] - X[j, k]
                    s += theta[k] * diff * diff
                R[i, j] = math.exp(-s)
        return R

    @njit(cache=True)
    def mixture_pdf_nb(xs, centers, sigmas, coefs):  # pragma: no cover
        n = xs.shape[0]
        k = centers.shape[0]
        out = np.empty(n)
        for i in range(n):
            acc = 0.0
            for j in range(k):
                z = (xs[i] - centers[j]) / sigmas[j]
                acc += coefs[j] * math.exp(-0.5 * z * z)
            out[i] = acc
        return out

    @njit(cache=True)
    def nondominated_ranks_nb(F):  # pragma: no cover
        n, m = F.shape
        dom_count = np.zeros(n, dtype=np.int64)
        dom_list = np.empty(n * n, dtype=np.int64)
        dom_len = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                weak = True
                strict = False
                for k in range(m):
                    if F[i, k] > F[j, k]:
                        weak = False
                        break
                    if F[i, k] < F[j, k]:
                        strict = True
                if weak and strict:
                    dom_list[i * n + dom_len[i]] = j
                    dom_len[i] += 1
                    dom_count[j] += 1
        ranks = np.full(n, -1, dtype=np.int64)
        current = np.empty(n, dtype=np.int64)
        nc = 0
        for i in range(n):
            if dom_count[i] == 0:
                ranks[i] = 0
                current[nc] = i
                nc += 1
        rank = 0
        while nc > 0:
            nxt = np.empty(n, dtype=np.int64)
            nn = 0
            for ci in range(nc):
                i = current[ci]
                for li in range(dom_len[i]):
                    j = dom_list[i * n + li]
                    dom_count[j] -= 1
                    if dom_count[j] == 0:
                        ranks[j] = rank + 1
                        nxt[nn] = j
                        nn += 1
            current = nxt
            nc = nn
            rank += 1
        return ranks

    corr_matrix = corr_matrix_nb
    cross_corr = cross_corr_nb
    mixture_pdf = mixture_pdf_nb
    nondominated_ranks = nondominated_ranks_nb
else:
    corr_matrix_nb = None
    cross_corr_nb = None
    mixture_pdf_nb = None
    nondominated_ranks_nb = None

    corr_matrix = corr_matrix_np
    cross_corr = cross_corr_np
    mixture_pdf = mixture_pdf_np
    nondominated_ranks = nondominated_ranks_np
