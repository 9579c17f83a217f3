"""Independent oracle implementations used to freeze expected values.

Everything here is deliberately written from the textbook definitions with
plain loops / dense linear algebra, independent of the package's code paths.
"""

from __future__ import annotations

import math

import numpy as np


# --- moments ---------------------------------------------------------------


def two_pass_variance(values: np.ndarray) -> np.ndarray:
    """Unbiased componentwise variance via explicit two-pass summation."""
    values = np.atleast_2d(values)
    n, m = values.shape
    mean = np.zeros(m)
    for row in values:
        mean += row
    mean /= n
    acc = np.zeros(m)
    for row in values:
        acc += (row - mean) ** 2
    return acc / (n - 1) if n > 1 else np.zeros(m)


# --- domination ------------------------------------------------------------


def dominates(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def brute_force_fronts(means: np.ndarray) -> list[list[int]]:
    """Peel nondominated sets by exhaustive pairwise checks."""
    remaining = list(range(len(means)))
    fronts = []
    while remaining:
        front = [
            i for i in remaining
            if not any(dominates(means[j], means[i]) for j in remaining if j != i)
        ]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def pairwise_fronts_fast(means: np.ndarray) -> np.ndarray:
    """Rank per point from the explicit O(n^2 m) domination matrix, peeling
    whole fronts with boolean masks (vectorized twin of brute_force_fronts)."""
    F = np.asarray(means, dtype=float)
    n = F.shape[0]
    dom = (np.all(F[:, None, :] <= F[None, :, :], axis=2)
           & np.any(F[:, None, :] < F[None, :, :], axis=2))
    ranks = np.full(n, -1)
    alive = np.ones(n, dtype=bool)
    rank = 0
    while alive.any():
        front = alive & ~dom[alive].any(axis=0)
        ranks[front] = rank
        alive &= ~front
        rank += 1
    return ranks


def brute_force_front0_mask(means: np.ndarray) -> np.ndarray:
    n = len(means)
    return np.array([
        not any(dominates(means[j], means[i]) for j in range(n) if j != i)
        for i in range(n)
    ])


# --- hypervolume -----------------------------------------------------------


def mc_hypervolume(points: np.ndarray, ref: np.ndarray, n_samples: int,
                   seed: int, origin=None) -> tuple[float, float]:
    """Monte-Carlo estimate (value, standard error) of the 2D dominated area
    inside the [origin, ref] box."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    ref = np.asarray(ref, dtype=float)
    if origin is None:
        origin = points.min(axis=0) if points.size else ref - 1.0
    origin = np.minimum(np.asarray(origin, dtype=float), ref - 1e-12)
    box = np.prod(ref - origin)
    gen = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    done = 0
    # sort by x with prefix-min of y for O(log n) domination queries
    keep = np.all(points < ref, axis=1)
    pts = points[keep]
    if pts.shape[0] == 0:
        return 0.0, math.sqrt(0.25 / n_samples) * box
    order = np.argsort(pts[:, 0])
    xs = pts[order, 0]
    ys = np.minimum.accumulate(pts[order, 1])
    while done < n_samples:
        chunk = min(n_samples - done, 1_000_000)
        u = origin + gen.uniform(size=(chunk, 2)) * (ref - origin)
        idx = np.searchsorted(xs, u[:, 0], side="right")
        dominated = np.zeros(chunk, dtype=bool)
        has = idx > 0
        dominated[has] = ys[idx[has] - 1] <= u[has, 1]
        hits += int(dominated.sum())
        done += chunk
    p = hits / n_samples
    se = math.sqrt(max(p * (1 - p), 1e-12) / n_samples) * box
    return p * box, se


# --- Gaussian process ------------------------------------------------------


def dense_gp_predict(X: np.ndarray, y: np.ndarray, nugget: np.ndarray,
                     theta: np.ndarray, sigma2: float, xq: np.ndarray,
                     trend_correction: bool = True):
    """Stochastic-kriging posterior via explicit matrix inversion.

    Returns (mu, mean, std_ok) with the constant trend estimated by GLS.
    """
    n = X.shape[0]
    R = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            R[i, j] = math.exp(-np.sum(theta * (X[i] - X[j]) ** 2))
    C = sigma2 * R + np.diag(nugget)
    Cinv = np.linalg.inv(C)
    ones = np.ones(n)
    mu = (ones @ Cinv @ y) / (ones @ Cinv @ ones)
    c = np.array([sigma2 * math.exp(-np.sum(theta * (xq - X[i]) ** 2))
                  for i in range(n)])
    mean = mu + c @ Cinv @ (y - mu * ones)
    var = sigma2 - c @ Cinv @ c
    if trend_correction:
        var += (1.0 - ones @ Cinv @ c) ** 2 / (ones @ Cinv @ ones)
    return mu, float(mean), float(math.sqrt(max(var, 0.0)))


def dense_gp_nll(X: np.ndarray, y: np.ndarray, nugget: np.ndarray,
                 theta: np.ndarray, sigma2: float) -> float:
    """Negative log marginal likelihood with GLS-profiled constant trend."""
    n = X.shape[0]
    R = np.exp(-sum(theta[k] * (X[:, k, None] - X[None, :, k]) ** 2
                    for k in range(X.shape[1])))
    C = sigma2 * R + np.diag(nugget)
    Cinv = np.linalg.inv(C)
    ones = np.ones(n)
    mu = (ones @ Cinv @ y) / (ones @ Cinv @ ones)
    resid = y - mu
    sign, logdet = np.linalg.slogdet(C)
    if sign <= 0:
        return math.inf
    return 0.5 * (n * math.log(2 * math.pi) + logdet + resid @ Cinv @ resid)


# --- expected improvement --------------------------------------------------


def mc_expected_improvement(z_min: float, mean: float, std: float,
                            n_draws: int, seed: int) -> float:
    """E[max(z_min - Y, 0)], Y ~ N(mean, std^2), antithetic Monte Carlo."""
    gen = np.random.Generator(np.random.PCG64(seed))
    half = n_draws // 2
    z = gen.standard_normal(half)
    up = np.maximum(z_min - (mean + std * z), 0.0)
    dn = np.maximum(z_min - (mean - std * z), 0.0)
    return float((up.sum() + dn.sum()) / (2 * half))


# --- test problems (scalar, from the textbook formulas) --------------------


def zdt1_point(x) -> tuple[float, float]:
    f1 = x[0]
    g = 1.0 + 9.0 * sum(x[1:]) / (len(x) - 1)
    return f1, g * (1.0 - math.sqrt(f1 / g))


def dtlz7_point(x) -> tuple[float, float]:
    f1 = x[0]
    g = 1.0 + 9.0 * sum(x[1:]) / (len(x) - 1)
    h = 2.0 - f1 / (1.0 + g) * (1.0 + math.sin(3.0 * math.pi * f1))
    return f1, (1.0 + g) * h


def _wfg_clip01(v: float) -> float:
    return min(max(v, 0.0), 1.0)


def _wfg_s_multi_scalar(y: float, A: float, B: float, C: float) -> float:
    t = abs(y - C) / (2.0 * (math.floor(C - y) + C))
    return _wfg_clip01((1.0 + math.cos((4.0 * A + 2.0) * math.pi * (0.5 - t))
                        + 4.0 * B * t * t) / (B + 2.0))


def wfg4_point(x, k: int = 4) -> tuple[float, float]:
    d = len(x)
    y = [x[i] / (2.0 * (i + 1)) for i in range(d)]
    y = [_wfg_s_multi_scalar(v, 30.0, 10.0, 0.35) for v in y]
    u1 = _wfg_clip01(sum(y[:k]) / k)
    u2 = _wfg_clip01(sum(y[k:]) / (d - k))
    f1 = u2 + 2.0 * _wfg_clip01(math.sin(0.5 * math.pi * u1))
    f2 = u2 + 4.0 * _wfg_clip01(math.cos(0.5 * math.pi * u1))
    return f1, f2


# --- Parzen mixtures -------------------------------------------------------


def _std_norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def truncated_mixture_pdf(x: float, centers, sigmas, weights, lower, upper) -> float:
    """Direct evaluation of a truncated-Gaussian mixture density."""
    total = 0.0
    for c, s, w in zip(centers, sigmas, weights):
        zn = _std_norm_cdf((upper - c) / s) - _std_norm_cdf((lower - c) / s)
        phi = math.exp(-0.5 * ((x - c) / s) ** 2) / (s * math.sqrt(2 * math.pi))
        total += w * phi / zn
    return total
