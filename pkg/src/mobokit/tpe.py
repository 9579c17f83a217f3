"""Per-dimension Parzen density pairs (l, g) over the good/poor split,
candidate sampling from l, and the aggregated log-likelihood-ratio score."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from . import kernels
from .core import Archive, RngStream, SearchSpace
from .pareto import SplitResult

__all__ = [
    "TpeConfig",
    "ParzenEstimator1D",
    "TpeDensityPair",
    "build_parzen",
    "build_density_pair",
    "sample_candidates",
    "aggregated_score",
    "aggregated_scores",
    "motpe_select",
]

DENSITY_FLOOR = 1e-300
_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class TpeConfig:
    # per-center bandwidth clamps: sigma_min = width / min(cap, n_subset),
    # sigma_max = width
    bandwidth_divisor_cap: int = 100


@dataclass(frozen=True)
class ParzenEstimator1D:
    """Truncated-Gaussian mixture on [lower, upper]; kernels are renormalized
    to the box so the density integrates to exactly 1."""

    centers: np.ndarray
    sigmas: np.ndarray
    weights: np.ndarray
    lower: float
    upper: float
    # precomputed: per-kernel truncated CDF bounds and pdf coefficients
    cdf_lo: np.ndarray
    cdf_hi: np.ndarray
    coefs: np.ndarray

    def pdf(self, xs) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return kernels.mixture_pdf(xs, self.centers, self.sigmas, self.coefs)

    def logpdf(self, xs) -> np.ndarray:
        return np.log(np.maximum(self.pdf(xs), DENSITY_FLOOR))

    def sample(self, n: int, gen: np.random.Generator) -> np.ndarray:
        idx = gen.choice(self.centers.size, size=n, p=self.weights)
        u = gen.uniform(self.cdf_lo[idx], self.cdf_hi[idx])
        return self.centers[idx] + self.sigmas[idx] * ndtri(u)


def build_parzen(values: np.ndarray, lower: float, upper: float,
                 config: TpeConfig = TpeConfig()) -> ParzenEstimator1D:
    """Mixture over the observed coordinate values plus one prior kernel at
    the domain midpoint with bandwidth equal to the domain width.

    Observed-kernel bandwidths follow the sorted-neighbor-distance rule,
    clamped to [width/min(cap, n), width].
    """
    values = np.asarray(values, dtype=float)
    width = upper - lower
    centers = np.concatenate([[0.5 * (lower + upper)], values])
    order = np.argsort(centers, kind="stable")
    sorted_c = centers[order]
    k = centers.size
    if k == 1:
        bw_sorted = np.array([width])
    else:
        left = np.diff(sorted_c, prepend=sorted_c[0])   # 0 at the first center
        right = np.diff(sorted_c, append=sorted_c[-1])  # 0 at the last center
        bw_sorted = np.maximum(left, right)
    sigmas = np.empty(k)
    sigmas[order] = bw_sorted
    if values.size > 0:
        sig_min = width / min(config.bandwidth_divisor_cap, values.size)
        sigmas[1:] = np.clip(sigmas[1:], sig_min, width)
    sigmas[0] = width  # prior kernel

    weights = np.full(k, 1.0 / k)
    a = (lower - centers) / sigmas
    b = (upper - centers) / sigmas
    cdf_lo = ndtr(a)
    cdf_hi = ndtr(b)
    coefs = weights / (sigmas * (cdf_hi - cdf_lo) * _SQRT_2PI)
    return ParzenEstimator1D(centers, sigmas, weights, float(lower),
                             float(upper), cdf_lo, cdf_hi, coefs)


@dataclass(frozen=True)
class TpeDensityPair:
    """One (l, g) estimator pair per input dimension."""

    space: SearchSpace
    ls: tuple[ParzenEstimator1D, ...]
    gs: tuple[ParzenEstimator1D, ...]

    @property
    def d(self) -> int:
        return len(self.ls)


def build_density_pair(archive: Archive, split: SplitResult,
                       space: SearchSpace,
                       config: TpeConfig = TpeConfig()) -> TpeDensityPair:
    """Estimate l from the good subset and g from the poor subset, one
    estimator per dimension. An empty poor subset degrades g to the prior
    kernel alone; an empty good subset is an error."""
    if split.good.size == 0:
        raise ValueError("good subset is empty; cannot build l densities")
    pts = archive.points()
    ls = []
    gs = []
    for j, dim in enumerate(space.dims):
        ls.append(build_parzen(pts[split.good, j], dim.lower, dim.upper, config))
        gs.append(build_parzen(pts[split.poor, j], dim.lower, dim.upper, config))
    return TpeDensityPair(space, tuple(ls), tuple(gs))


def sample_candidates(pair: TpeDensityPair, n_c: int, rng: RngStream) -> np.ndarray:
    """n_c x d matrix whose column j holds draws from l_j; integer dimensions
    are rounded at emission."""
    if n_c < 1:
        raise ValueError("need at least one candidate")
    gen = rng.generator()
    cand = np.empty((n_c, pair.d))
    for j in range(pair.d):
        cand[:, j] = pair.ls[j].sample(n_c, gen)
    return pair.space.round_integers(cand)


def aggregated_scores(pair: TpeDensityPair, X: np.ndarray) -> np.ndarray:
    """AS for each row: sum over dimensions of log l_j - log g_j."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    scores = np.zeros(X.shape[0])
    for j in range(pair.d):
        scores += pair.ls[j].logpdf(X[:, j]) - pair.gs[j].logpdf(X[:, j])
    return scores


def aggregated_score(pair: TpeDensityPair, x: np.ndarray) -> float:
    return float(aggregated_scores(pair, np.asarray(x, dtype=float)[None, :])[0])


def motpe_select(pair: TpeDensityPair, n_c: int, rng: RngStream) -> np.ndarray:
    """Baseline selection rule: per dimension independently, keep the drawn
    value with the highest log-likelihood ratio (ties break to the first
    drawn candidate)."""
    cand = sample_candidates(pair, n_c, rng)
    point = np.empty(pair.d)
    for j in range(pair.d):
        ratio = pair.ls[j].logpdf(cand[:, j]) - pair.gs[j].logpdf(cand[:, j])
        point[j] = cand[np.argmax(ratio), j]
    return point
