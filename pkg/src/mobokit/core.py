"""Domain types shared by every module: search space, seeded RNG streams,
observation records and the evaluation archive."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DimensionSpec",
    "SearchSpace",
    "RngStream",
    "ObservationRecord",
    "Archive",
    "ShapeError",
    "sample_uniform",
    "merge_observation",
]


class ShapeError(ValueError):
    """Raised when a point or replication vector has the wrong dimension."""


@dataclass(frozen=True)
class DimensionSpec:
    """One coordinate of the search space."""

    name: str
    kind: str  # "continuous" | "integer"
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in ("continuous", "integer"):
            raise ValueError(f"unknown dimension kind {self.kind!r}")
        if not self.lower < self.upper:
            raise ValueError(f"dimension {self.name!r}: lower must be < upper")
        if self.kind == "integer" and (
            self.lower != int(self.lower) or self.upper != int(self.upper)
        ):
            raise ValueError(f"dimension {self.name!r}: integer bounds must be integral")


@dataclass(frozen=True)
class SearchSpace:
    """Box search space with continuous and integer dimensions."""

    dims: tuple[DimensionSpec, ...]

    def __post_init__(self):
        if len(self.dims) < 1:
            raise ValueError("search space needs at least one dimension")
        object.__setattr__(self, "dims", tuple(self.dims))

    @classmethod
    def continuous(cls, lower, upper, names=None) -> "SearchSpace":
        """Build an all-continuous space from bound arrays."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if names is None:
            names = [f"x{i + 1}" for i in range(lower.size)]
        return cls(tuple(
            DimensionSpec(n, "continuous", float(lo), float(hi))
            for n, lo, hi in zip(names, lower, upper)
        ))

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def lower(self) -> np.ndarray:
        return np.array([s.lower for s in self.dims])

    @property
    def upper(self) -> np.ndarray:
        return np.array([s.upper for s in self.dims])

    @property
    def integer_mask(self) -> np.ndarray:
        return np.array([s.kind == "integer" for s in self.dims])

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.d,) and bool(
            np.all(x >= self.lower) and np.all(x <= self.upper)
        )

    def check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ShapeError(f"expected point of dimension {self.d}, got shape {x.shape}")
        if not self.contains(x):
            raise ValueError(f"point {x} outside bounds")
        return x

    def scale_to_unit(self, X: np.ndarray) -> np.ndarray:
        """Map raw coordinates onto the unit cube (rows = points)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return (X - self.lower) / (self.upper - self.lower)

    def round_integers(self, x: np.ndarray) -> np.ndarray:
        """Round integer dimensions to the nearest lattice value."""
        x = np.array(x, dtype=float)
        mask = self.integer_mask
        if mask.any():
            if x.ndim == 1:
                x[mask] = np.rint(x[mask])
            else:
                x[:, mask] = np.rint(x[:, mask])
        return x


def _mix64(a: int, b: int) -> int:
    # splitmix64-style integer hash; keeps child stream ids platform-stable.
    z = (a ^ (b * 0x9E3779B97F4A7C15)) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return (z ^ (z >> 31)) & 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream identified by (seed, stream_id).

    Identical identifiers yield identical draw sequences on every platform
    (PCG64 under the hood). Operations take a stream and instantiate a fresh
    generator, so the same stream passed twice replays the same draws.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence((self.seed & 0xFFFFFFFFFFFFFFFF,
                                     self.stream_id & 0xFFFFFFFFFFFFFFFF))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, key: int) -> "RngStream":
        """Derive an independent sub-stream for the given integer key."""
        return RngStream(self.seed, _mix64(self.stream_id, key + 1))


@dataclass
class ObservationRecord:
    """A design point with its raw replications and derived moments.

    ``sample_var`` is the unbiased componentwise variance of the replications
    (not yet divided by the replication count r).
    """

    point: np.ndarray
    replications: np.ndarray  # (r, m)
    sample_mean: np.ndarray = field(init=False)
    sample_var: np.ndarray = field(init=False)

    def __post_init__(self):
        self.point = np.asarray(self.point, dtype=float)
        self.replications = np.atleast_2d(np.asarray(self.replications, dtype=float))
        if self.replications.shape[0] < 1:
            raise ValueError("record needs at least one replication")
        self._recompute()

    def _recompute(self):
        reps = self.replications
        self.sample_mean = reps.mean(axis=0)
        if reps.shape[0] >= 2:
            self.sample_var = reps.var(axis=0, ddof=1)
        else:
            self.sample_var = np.zeros(reps.shape[1])

    @property
    def r(self) -> int:
        return self.replications.shape[0]

    @property
    def single_replication(self) -> bool:
        """True when the variance estimate is uninformative (r = 1)."""
        return self.r == 1

    def pool(self, reps: np.ndarray):
        self.replications = np.vstack([self.replications, np.atleast_2d(reps)])
        self._recompute()


@dataclass
class Archive:
    """Insertion-ordered set of evaluated points; duplicates pool replications."""

    space: SearchSpace
    m: int
    records: list[ObservationRecord] = field(default_factory=list)

    def __post_init__(self):
        self._index: dict[tuple, int] = {
            tuple(rec.point): i for i, rec in enumerate(self.records)
        }

    def __len__(self) -> int:
        return len(self.records)

    def points(self) -> np.ndarray:
        return np.array([rec.point for rec in self.records])

    def means(self) -> np.ndarray:
        return np.array([rec.sample_mean for rec in self.records])

    def stds(self) -> np.ndarray:
        return np.sqrt(np.array([rec.sample_var for rec in self.records]))

    def find(self, point: np.ndarray) -> int | None:
        return self._index.get(tuple(np.asarray(point, dtype=float)))

    def merge(self, point: np.ndarray, reps) -> bool:
        """Insert or pool an observation; returns True when pooled into an
        existing record."""
        point = self.space.check_point(point)
        reps = np.atleast_2d(np.asarray(reps, dtype=float))
        if reps.shape[1] != self.m:
            raise ShapeError(
                f"replications have {reps.shape[1]} objectives, archive has {self.m}"
            )
        idx = self.find(point)
        if idx is not None:
            self.records[idx].pool(reps)
            return True
        self.records.append(ObservationRecord(point, reps))
        self._index[tuple(point)] = len(self.records) - 1
        return False


def merge_observation(archive: Archive, point: np.ndarray, reps) -> Archive:
    """Merge one evaluation into the archive (pooling duplicates) and return it."""
    archive.merge(point, reps)
    return archive


def sample_uniform(space: SearchSpace, rng: RngStream) -> np.ndarray:
    """Draw one point uniformly inside the box; integer dimensions are drawn
    uniformly over their lattice values."""
    gen = rng.generator()
    x = space.lower + gen.uniform(size=space.d) * (space.upper - space.lower)
    mask = space.integer_mask
    if mask.any():
        lo = space.lower[mask].astype(int)
        hi = space.upper[mask].astype(int)
        x[mask] = gen.integers(lo, hi + 1).astype(float)
    return x
