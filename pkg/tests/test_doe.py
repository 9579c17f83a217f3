import numpy as np
import pytest

from mobokit.core import RngStream, SearchSpace
from mobokit.doe import default_init_size, latin_hypercube, random_design


def space_of(d):
    return SearchSpace.continuous(np.full(d, -1.0), np.full(d, 3.0))


def stratum_occupancy(points, space, n):
    """Count how many points land in each of the n strata, per dimension."""
    u = space.scale_to_unit(points)
    counts = np.zeros((space.d, n), dtype=int)
    for j in range(space.d):
        idx = np.minimum((u[:, j] * n).astype(int), n - 1)
        for i in idx:
            counts[j, i] += 1
    return counts


def test_default_size_rule():
    assert default_init_size(5) == 54
    assert default_init_size(2) == 21


def test_single_point_in_bounds():
    space = space_of(3)
    design = latin_hypercube(space, 1, RngStream(0))
    assert design.size == 1
    assert space.contains(design.points[0])


def test_table_scale_occupancy():
    # d=5 with the 11d-1 design size: every stratum holds exactly one point
    space = space_of(5)
    design = latin_hypercube(space, 54, RngStream(1))
    assert np.all(stratum_occupancy(design.points, space, 54) == 1)


def test_projection_distinct_strata():
    space = space_of(2)
    design = latin_hypercube(space, 10, RngStream(2))
    u = space.scale_to_unit(design.points)
    for j in range(2):
        strata = np.floor(u[:, j] * 10).astype(int)
        assert len(set(strata.tolist())) == 10


def test_determinism():
    space = space_of(4)
    a = latin_hypercube(space, 20, RngStream(7, 3))
    b = latin_hypercube(space, 20, RngStream(7, 3))
    assert np.array_equal(a.points, b.points)


def test_rejects_empty():
    with pytest.raises(ValueError):
        latin_hypercube(space_of(2), 0, RngStream(0))


def test_random_design_bounds_and_scheme():
    space = space_of(3)
    design = random_design(space, 25, RngStream(4))
    assert design.scheme == "random"
    assert design.size == 25
    assert all(space.contains(p) for p in design.points)
