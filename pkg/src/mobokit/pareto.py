"""Nondominated sorting, the gamma-controlled good/poor split, and the exact
2D hypervolume indicator (minimization orientation throughout)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import Archive

__all__ = [
    "FrontPartition",
    "SplitResult",
    "FrontEntry",
    "nondominated_sort",
    "split_gamma",
    "hypervolume_2d",
    "pareto_front",
]


@dataclass(frozen=True)
class FrontPartition:
    """Indices grouped by nondomination rank; fronts[0] is the Pareto set."""

    fronts: tuple[np.ndarray, ...]
    ranks: np.ndarray

    @property
    def n_fronts(self) -> int:
        return len(self.fronts)


@dataclass(frozen=True)
class SplitResult:
    good: np.ndarray
    poor: np.ndarray
    gamma: float


@dataclass(frozen=True)
class FrontEntry:
    point: np.ndarray
    mean: np.ndarray
    std: np.ndarray


def nondominated_sort(means: np.ndarray) -> FrontPartition:
    """Partition rows of `means` into nondomination fronts."""
    F = np.atleast_2d(np.asarray(means, dtype=float))
    ranks = kernels.nondominated_ranks(F)
    fronts = tuple(
        np.flatnonzero(ranks == r) for r in range(int(ranks.max()) + 1)
    )
    return FrontPartition(fronts, ranks)


def _effective_front(points: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Nondominated points strictly inside the reference box, sorted by f1."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        return pts.reshape(0, 2)
    keep = np.all(pts < ref, axis=1)
    pts = pts[keep]
    if pts.shape[0] == 0:
        return pts
    # sort by f1 ascending, f2 ascending; then keep strictly improving f2
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    front = []
    best_f2 = math.inf
    for p in pts:
        if p[1] < best_f2:
            front.append(p)
            best_f2 = p[1]
    return np.array(front)


def hypervolume_2d(points, ref) -> float:
    """Exact Lebesgue measure of the union of boxes [p, ref] over the
    nondominated subset of `points`; points with any coordinate >= the
    reference are dropped."""
    ref = np.asarray(ref, dtype=float)
    if ref.shape != (2,):
        raise ValueError("hypervolume_2d needs a 2-vector reference point")
    front = _effective_front(np.asarray(points, dtype=float), ref)
    hv = 0.0
    prev_f2 = ref[1]
    for f1, f2 in front:
        hv += (ref[0] - f1) * (prev_f2 - f2)
        prev_f2 = f2
    return hv


def _greedy_boundary_pick(members: np.ndarray, means: np.ndarray,
                          ref: np.ndarray, need: int) -> np.ndarray:
    """Greedy subset of one front maximizing joint hypervolume; ties break
    toward the lowest index."""
    chosen: list[int] = []
    selected_pts: list[np.ndarray] = []
    remaining = list(members)
    while len(chosen) < need and remaining:
        best_idx = None
        best_gain = -math.inf
        for idx in remaining:
            hv = hypervolume_2d(np.array(selected_pts + [means[idx]]), ref)
            if hv > best_gain:
                best_gain = hv
                best_idx = idx
        chosen.append(best_idx)
        selected_pts.append(means[best_idx])
        remaining.remove(best_idx)
    return np.array(chosen, dtype=np.int64)


def split_gamma(partition: FrontPartition, means: np.ndarray, gamma: float,
                ref) -> SplitResult:
    """Consume fronts in rank order into the good set until ceil(gamma*n);
    a front that straddles the boundary is split by greedy hypervolume
    contribution with respect to `ref`."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    means = np.atleast_2d(np.asarray(means, dtype=float))
    ref = np.asarray(ref, dtype=float)
    n = means.shape[0]
    target = math.ceil(gamma * n)
    good: list[int] = []
    for front in partition.fronts:
        if len(good) + front.size <= target:
            good.extend(front.tolist())
        else:
            need = target - len(good)
            if need > 0:
                good.extend(_greedy_boundary_pick(front, means, ref, need).tolist())
            break
        if len(good) == target:
            break
    good_arr = np.array(sorted(good), dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[good_arr] = False
    return SplitResult(good_arr, np.flatnonzero(mask), float(gamma))


def pareto_front(archive: Archive) -> list[FrontEntry]:
    """Front-0 records of the archive's sample means, with per-objective
    replication standard deviations attached."""
    if len(archive) == 0:
        raise ValueError("archive is empty")
    means = archive.means()
    front0 = nondominated_sort(means).fronts[0]
    stds = archive.stds()
    return [
        FrontEntry(archive.records[i].point, means[i], stds[i]) for i in front0
    ]
