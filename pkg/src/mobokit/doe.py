"""Initial-design generation: Latin hypercube and plain random designs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RngStream, SearchSpace, sample_uniform

__all__ = ["InitialDesign", "default_init_size", "latin_hypercube", "random_design"]


def default_init_size(d: int) -> int:
    """Default design size 11*d - 1."""
    return 11 * d - 1


@dataclass(frozen=True)
class InitialDesign:
    points: np.ndarray  # (n, d)
    scheme: str  # "lhs" | "random"

    @property
    def size(self) -> int:
        return self.points.shape[0]


def latin_hypercube(space: SearchSpace, n: int, rng: RngStream) -> InitialDesign:
    """Plain Latin hypercube sample: one point per equal-width stratum in
    every dimension, jittered uniformly within strata."""
    if n < 1:
        raise ValueError("latin hypercube needs n >= 1")
    gen = rng.generator()
    d = space.d
    u = np.empty((n, d))
    for j in range(d):
        perm = gen.permutation(n)
        u[:, j] = (perm + gen.uniform(size=n)) / n
    pts = space.lower + u * (space.upper - space.lower)
    return InitialDesign(space.round_integers(pts), "lhs")


def random_design(space: SearchSpace, n: int, rng: RngStream) -> InitialDesign:
    """Independent uniform draws; used for the external-evaluator path."""
    if n < 1:
        raise ValueError("random design needs n >= 1")
    pts = np.array([sample_uniform(space, rng.child(i)) for i in range(n)])
    return InitialDesign(pts, "random")
