"""Augmented Tchebycheff scalarization with per-iteration random weights.

Scalarization is applied to each replication individually so that the
scalarized objective carries a replication-based variance estimate; the
scalarized mean is therefore NOT the scalarization of the mean vector (max is
nonlinear)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Archive, RngStream

__all__ = [
    "WeightVector",
    "ScalarizedDataset",
    "draw_weights",
    "scalarize_replication",
    "build_scalarized_dataset",
]

DEFAULT_RHO = 0.05


@dataclass(frozen=True)
class WeightVector:
    w: np.ndarray
    rho: float = DEFAULT_RHO

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1 or w.size < 2:
            raise ValueError("weights must be a vector of length >= 2")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class ScalarizedDataset:
    """Per-record scalarized moments plus the normalization anchors used."""

    points: np.ndarray  # (n, d) raw coordinates
    scalar_mean: np.ndarray  # (n,)
    scalar_var_of_mean: np.ndarray  # (n,) replication variance / r
    anchors_lo: np.ndarray  # (m,)
    anchors_hi: np.ndarray  # (m,)
    low_information: np.ndarray  # (n,) bool, True when r = 1

    @property
    def n(self) -> int:
        return self.points.shape[0]


def draw_weights(m: int, rng: RngStream, rho: float = DEFAULT_RHO) -> WeightVector:
    """Uniform draw from the unit simplex."""
    if m < 2:
        raise ValueError("need at least two objectives")
    gen = rng.generator()
    return WeightVector(gen.dirichlet(np.ones(m)), rho)


def _normalize(f: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    width = hi - lo
    if np.any(width <= 0):
        raise ValueError("degenerate normalization anchors (hi must exceed lo)")
    return (f - lo) / width


def scalarize_replication(f: np.ndarray, wv: WeightVector, anchors) -> float:
    """max_j(w_j fbar_j) + rho * sum_j(w_j fbar_j) with objectives normalized
    by the given (lo, hi) anchors."""
    lo, hi = (np.asarray(a, dtype=float) for a in anchors)
    fbar = _normalize(np.asarray(f, dtype=float), lo, hi)
    wf = wv.w * fbar
    return float(wf.max() + wv.rho * wf.sum())


def build_scalarized_dataset(archive: Archive, wv: WeightVector) -> ScalarizedDataset:
    """Scalarize every replication in the archive under the current weights.

    Anchors are the componentwise min/max of the archive's sample means;
    degenerate anchor widths (constant objective across the archive) are
    widened to 1 so normalization stays defined.
    """
    if len(archive) == 0:
        raise ValueError("archive is empty")
    means = archive.means()
    lo = means.min(axis=0)
    hi = means.max(axis=0)
    degenerate = hi - lo <= 0
    hi = np.where(degenerate, lo + 1.0, hi)

    n = len(archive)
    scalar_mean = np.empty(n)
    scalar_vom = np.empty(n)
    low_info = np.zeros(n, dtype=bool)
    for i, rec in enumerate(archive.records):
        fbar = _normalize(rec.replications, lo, hi)  # (r, m)
        wf = fbar * wv.w
        s = wf.max(axis=1) + wv.rho * wf.sum(axis=1)  # (r,)
        scalar_mean[i] = s.mean()
        r = s.size
        if r >= 2:
            scalar_vom[i] = s.var(ddof=1) / r
        else:
            scalar_vom[i] = 0.0
            low_info[i] = True
    return ScalarizedDataset(archive.points(), scalar_mean, scalar_vom, lo, hi, low_info)
