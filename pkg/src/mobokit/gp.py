"""Stochastic kriging: a Gaussian-kernel GP over scalarized means whose
heteroscedastic nugget is fixed from replication variances rather than
learned. Only the extrinsic parameters (lengthscales, process variance,
constant trend) enter the likelihood.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import minimize

from . import kernels
from .core import RngStream, SearchSpace
from .scalarize import ScalarizedDataset

__all__ = ["GpConfig", "GpModel", "GpPrediction", "GpFitError", "fit",
           "make_model", "predict", "predict_batch"]

log = logging.getLogger(__name__)

JITTER_LADDER = (1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


class GpFitError(RuntimeError):
    """Covariance could not be factorized (or no restart converged)."""


@dataclass(frozen=True)
class GpConfig:
    restarts: int = 10
    theta_bounds: tuple[float, float] = (1e-3, 1e3)
    sigma2_rel_bounds: tuple[float, float] = (1e-8, 1e3)  # relative to var(y)
    jitter_ladder: tuple[float, ...] = JITTER_LADDER
    max_opt_iter: int = 100
    trend_correction: bool = True


@dataclass
class GpModel:
    """Fitted model state, immutable after fit; predictions are pure."""

    space: SearchSpace
    X: np.ndarray  # (n, d) unit-cube scaled inputs
    y: np.ndarray
    nugget: np.ndarray
    theta: np.ndarray  # inverse-squared lengthscales
    sigma2: float
    mu: float
    trend_correction: bool
    jitter: float
    log_likelihood: float
    chol: tuple = field(repr=False, default=None)
    alpha: np.ndarray = field(repr=False, default=None)  # C^-1 (y - mu 1)
    ones_cinv_ones: float = field(repr=False, default=0.0)

    @property
    def n(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True)
class GpPrediction:
    mean: float
    std_ok: float  # ordinary-kriging std: extrinsic uncertainty only


def _chol_with_jitter(C: np.ndarray, ladder) -> tuple[tuple, float]:
    scale = float(np.mean(np.diag(C)))
    for jitter in (0.0, *ladder):
        try:
            f = cho_factor(C + jitter * scale * np.eye(C.shape[0]), lower=True)
            return f, jitter * scale
        except LinAlgError:
            continue
    raise GpFitError("covariance not positive definite after max jitter")


def _make_objective(X: np.ndarray, y: np.ndarray, nugget: np.ndarray,
                    ladder):
    """Negative log marginal likelihood and gradient in log-parameter space
    (log theta_1..d, log sigma2), with the constant trend profiled out by GLS."""
    n, d = X.shape
    ones = np.ones(n)
    D = np.empty((d, n, n))
    for k in range(d):
        diff = X[:, k, None] - X[None, :, k]
        D[k] = diff * diff

    def objective(p: np.ndarray):
        theta = np.exp(p[:d])
        sigma2 = math.exp(p[d])
        R = np.exp(-np.tensordot(theta, D, axes=1))
        C = sigma2 * R + np.diag(nugget)
        try:
            f, _ = _chol_with_jitter(C, ladder)
        except GpFitError:
            return 1e25, np.zeros(d + 1)
        cinv_y = cho_solve(f, y)
        cinv_1 = cho_solve(f, ones)
        mu = (ones @ cinv_y) / (ones @ cinv_1)
        alpha = cinv_y - mu * cinv_1
        logdet = 2.0 * np.sum(np.log(np.diag(f[0])))
        resid = y - mu
        nll = 0.5 * (n * math.log(2.0 * math.pi) + logdet + resid @ alpha)
        # d(nll)/dp = -1/2 sum(A o dC/dp), A = alpha alpha^T - C^-1;
        # the GLS trend makes d(nll)/dmu vanish, so mu is treated as fixed.
        Cinv = cho_solve(f, np.eye(n))
        A = np.outer(alpha, alpha) - Cinv
        grad = np.empty(d + 1)
        AR = A * R
        for k in range(d):
            grad[k] = 0.5 * sigma2 * theta[k] * np.sum(AR * D[k])
        grad[d] = -0.5 * sigma2 * np.sum(AR)
        return float(nll), grad

    return objective


def fit(dataset: ScalarizedDataset, space: SearchSpace, config: GpConfig,
        rng: RngStream, warm_start: np.ndarray | None = None) -> GpModel:
    """Maximize the Gaussian log marginal likelihood over (theta, sigma2)
    with the nugget held fixed at the dataset's variance-of-mean values.

    Multi-start bounded L-BFGS from Latin-hypercube starts in log space; the
    optional warm start (a previous optimum, in log space) is added as one
    extra start.
    """
    X = space.scale_to_unit(dataset.points)
    y = np.asarray(dataset.scalar_mean, dtype=float)
    nugget = np.maximum(np.asarray(dataset.scalar_var_of_mean, dtype=float), 0.0)
    n, d = X.shape
    if n < d + 2:
        log.warning("fitting a %d-dim GP on only %d points", d, n)

    vscale = float(np.var(y))
    if vscale <= 0.0:
        vscale = 1.0
    lo = np.array([math.log(config.theta_bounds[0])] * d
                  + [math.log(config.sigma2_rel_bounds[0] * vscale)])
    hi = np.array([math.log(config.theta_bounds[1])] * d
                  + [math.log(config.sigma2_rel_bounds[1] * vscale)])
    bounds = list(zip(lo, hi))

    gen = rng.generator()
    k = config.restarts
    starts = np.empty((k, d + 1))
    for j in range(d + 1):
        perm = gen.permutation(k)
        starts[:, j] = lo[j] + (perm + gen.uniform(size=k)) / k * (hi[j] - lo[j])
    if warm_start is not None:
        starts = np.vstack([starts, np.clip(warm_start, lo, hi)])

    objective = _make_objective(X, y, nugget, config.jitter_ladder)
    best = None
    for p0 in starts:
        res = minimize(objective, p0, jac=True, method="L-BFGS-B",
                       bounds=bounds, options={"maxiter": config.max_opt_iter})
        if res.fun < 1e24 and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise GpFitError("no likelihood restart produced a factorizable covariance")

    theta = np.exp(best.x[:d])
    sigma2 = math.exp(best.x[d])
    return make_model(dataset, space, theta, sigma2, config,
                      log_likelihood=-float(best.fun))


def make_model(dataset: ScalarizedDataset, space: SearchSpace, theta: np.ndarray,
               sigma2: float, config: GpConfig = GpConfig(),
               log_likelihood: float = math.nan) -> GpModel:
    """Assemble the predictor state for fixed kernel hyperparameters (the
    trend is still GLS-estimated)."""
    X = space.scale_to_unit(dataset.points)
    y = np.asarray(dataset.scalar_mean, dtype=float)
    nugget = np.maximum(np.asarray(dataset.scalar_var_of_mean, dtype=float), 0.0)
    theta = np.asarray(theta, dtype=float)
    n = X.shape[0]
    R = kernels.corr_matrix(X, theta)
    C = sigma2 * R + np.diag(nugget)
    f, jitter = _chol_with_jitter(C, config.jitter_ladder)
    ones = np.ones(n)
    cinv_y = cho_solve(f, y)
    cinv_1 = cho_solve(f, ones)
    mu = float((ones @ cinv_y) / (ones @ cinv_1))
    alpha = cinv_y - mu * cinv_1
    return GpModel(
        space=space, X=X, y=y, nugget=nugget, theta=theta, sigma2=float(sigma2),
        mu=mu, trend_correction=config.trend_correction, jitter=jitter,
        log_likelihood=log_likelihood, chol=f, alpha=alpha,
        ones_cinv_ones=float(ones @ cinv_1),
    )


def predict_batch(model: GpModel, X_raw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and ordinary-kriging std for raw-coordinate rows.

    The std covers extrinsic (metamodel) uncertainty only: the intrinsic
    nugget is excluded, and the correction for the estimated constant trend
    is added when the model was fit with trend_correction.
    """
    Xq = model.space.scale_to_unit(np.atleast_2d(np.asarray(X_raw, dtype=float)))
    c = model.sigma2 * kernels.cross_corr(Xq, model.X, model.theta)
    mean = model.mu + c @ model.alpha
    w = cho_solve(model.chol, c.T)  # C^-1 c^T, (n, nq)
    var = model.sigma2 - np.einsum("ij,ji->i", c, w)
    if model.trend_correction:
        u = 1.0 - w.sum(axis=0)
        var = var + u * u / model.ones_cinv_ones
    std = np.sqrt(np.maximum(var, 0.0))
    return mean, std


def predict(model: GpModel, x: np.ndarray) -> GpPrediction:
    """Posterior at a single raw-coordinate point."""
    mean, std = predict_batch(model, np.asarray(x, dtype=float)[None, :])
    return GpPrediction(float(mean[0]), float(std[0]))
