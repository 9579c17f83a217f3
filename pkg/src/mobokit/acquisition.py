"""Infill selection: the modified expected improvement (improvement measured
against the prediction at the best-sample-mean point, with the noise-free
kriging std), maximized either over the density-filtered candidate set or by
particle swarm over the whole box."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtr

from .core import RngStream, SearchSpace
from .gp import GpModel, predict_batch
from .scalarize import ScalarizedDataset
from .tpe import TpeDensityPair, aggregated_scores, sample_candidates

__all__ = [
    "MeiContext",
    "PsoConfig",
    "build_mei_context",
    "mei",
    "mei_batch",
    "select_infill_gp_motpe",
    "select_infill_gp_pso",
    "pso_maximize",
]

STD_EPS = 1e-12
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class MeiContext:
    model: GpModel
    z_min: float  # GP prediction at the point with lowest scalarized sample mean
    x_min: np.ndarray


@dataclass(frozen=True)
class PsoConfig:
    swarm: int = 300
    iters: int = 1800
    cognitive: float = 0.5
    social: float = 0.3
    inertia: float = 0.9
    stall_iters: int = 200
    stall_tol: float = 1e-12

    def __post_init__(self):
        if self.swarm < 2 or self.iters < 1:
            raise ValueError("swarm must be >= 2 and iters >= 1")


def build_mei_context(model: GpModel, dataset: ScalarizedDataset) -> MeiContext:
    """Locate the archive point with the lowest scalarized sample mean (ties
    break to the lowest index) and predict the model there."""
    i_min = int(np.argmin(dataset.scalar_mean))
    x_min = dataset.points[i_min]
    z_min, _ = predict_batch(model, x_min[None, :])
    return MeiContext(model, float(z_min[0]), x_min)


def _mei_from_moments(z_min: float, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    diff = z_min - mean
    out = np.maximum(diff, 0.0)
    ok = std > STD_EPS
    if np.any(ok):
        u = diff[ok] / std[ok]
        phi = _INV_SQRT_2PI * np.exp(-0.5 * u * u)
        out[ok] = diff[ok] * ndtr(u) + std[ok] * phi
    return np.maximum(out, 0.0)


def mei_batch(ctx: MeiContext, X: np.ndarray) -> np.ndarray:
    """Modified expected improvement for raw-coordinate rows."""
    mean, std = predict_batch(ctx.model, X)
    return _mei_from_moments(ctx.z_min, mean, std)


def mei(ctx: MeiContext, x: np.ndarray) -> float:
    return float(mei_batch(ctx, np.asarray(x, dtype=float)[None, :])[0])


def select_infill_gp_motpe(ctx: MeiContext, pair: TpeDensityPair, n_c: int,
                           rng: RngStream) -> tuple[np.ndarray, bool]:
    """Draw n_c candidate points from the l densities, keep those with a
    positive aggregated score, and return the MEI maximizer among them
    (ties break to the lowest candidate index).

    When no candidate scores positive, falls back to the single candidate
    with maximal aggregated score; the returned flag reports the fallback.
    """
    cand = sample_candidates(pair, n_c, rng)
    scores = aggregated_scores(pair, cand)
    inside = np.flatnonzero(scores > 0.0)
    fallback = inside.size == 0
    if fallback:
        chosen = cand[[int(np.argmax(scores))]]
    else:
        chosen = cand[inside]
    values = mei_batch(ctx, chosen)
    return chosen[int(np.argmax(values))].copy(), fallback


def pso_maximize(f_batch: Callable[[np.ndarray], np.ndarray], space: SearchSpace,
                 cfg: PsoConfig, rng: RngStream) -> tuple[np.ndarray, float]:
    """Global-best PSO maximizing a batch objective over the box.

    Positions are clamped to the bounds and velocities to half the box width;
    stops at the iteration cap or after `stall_iters` iterations without a
    `stall_tol` improvement of the global best.
    """
    gen = rng.generator()
    lb, ub = space.lower, space.upper
    vmax = 0.5 * (ub - lb)
    S, d = cfg.swarm, space.d

    x = lb + gen.uniform(size=(S, d)) * (ub - lb)
    v = gen.uniform(-1.0, 1.0, size=(S, d)) * vmax
    fx = f_batch(x)
    pbest = x.copy()
    fpbest = fx.copy()
    gi = int(np.argmax(fpbest))
    gbest = pbest[gi].copy()
    fgbest = float(fpbest[gi])

    stall = 0
    for _ in range(cfg.iters):
        r1 = gen.uniform(size=(S, d))
        r2 = gen.uniform(size=(S, d))
        v = (cfg.inertia * v + cfg.cognitive * r1 * (pbest - x)
             + cfg.social * r2 * (gbest - x))
        np.clip(v, -vmax, vmax, out=v)
        x = np.clip(x + v, lb, ub)
        fx = f_batch(x)
        improved = fx > fpbest
        pbest[improved] = x[improved]
        fpbest[improved] = fx[improved]
        gi = int(np.argmax(fpbest))
        if fpbest[gi] > fgbest + cfg.stall_tol:
            stall = 0
        else:
            stall += 1
        if fpbest[gi] > fgbest:
            gbest = pbest[gi].copy()
            fgbest = float(fpbest[gi])
        if stall >= cfg.stall_iters:
            break
    return gbest, fgbest


def select_infill_gp_pso(ctx: MeiContext, space: SearchSpace, cfg: PsoConfig,
                         rng: RngStream) -> np.ndarray:
    """Maximize MEI over the whole box by PSO; integer dims round at emission."""
    best, _ = pso_maximize(lambda X: mei_batch(ctx, X), space, cfg, rng)
    return space.round_integers(best)
