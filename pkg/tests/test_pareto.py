import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobokit.core import Archive, SearchSpace, merge_observation
from mobokit.pareto import (hypervolume_2d, nondominated_sort, pareto_front,
                            split_gamma)

from oracles import brute_force_front0_mask, brute_force_fronts, mc_hypervolume


class TestNondominatedSort:
    def test_singleton(self):
        part = nondominated_sort(np.array([[1.0, 2.0]]))
        assert part.n_fronts == 1
        assert part.fronts[0].tolist() == [0]

    def test_three_point_example(self):
        part = nondominated_sort(np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]]))
        assert part.fronts[0].tolist() == [0, 1]
        assert part.fronts[1].tolist() == [2]

    @pytest.mark.parametrize("m", [2, 3])
    def test_matches_pairwise_oracle(self, m):
        gen = np.random.default_rng(100 + m)
        F = gen.uniform(size=(200, m))
        part = nondominated_sort(F)
        for r, front in enumerate(brute_force_fronts(F)):
            assert sorted(part.fronts[r].tolist()) == sorted(front)

    def test_every_index_once(self):
        gen = np.random.default_rng(5)
        F = gen.uniform(size=(60, 2))
        part = nondominated_sort(F)
        seen = np.concatenate([f for f in part.fronts])
        assert sorted(seen.tolist()) == list(range(60))


class TestHypervolume2D:
    def test_empty(self):
        assert hypervolume_2d(np.empty((0, 2)), np.array([2.0, 2.0])) == 0.0

    def test_two_point_exact(self):
        pts = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert hypervolume_2d(pts, np.array([2.0, 2.0])) == 3.0

    def test_points_beyond_ref_dropped(self):
        pts = np.array([[0.5, 0.5], [3.0, 0.1], [0.1, 2.0]])
        ref = np.array([2.0, 2.0])
        assert hypervolume_2d(pts, ref) == hypervolume_2d(pts[:1], ref)

    def test_matches_monte_carlo(self):
        gen = np.random.default_rng(8)
        for trial in range(5):
            pts = gen.uniform(0.0, 1.0, size=(12, 2))
            ref = np.array([1.2, 1.2])
            hv = hypervolume_2d(pts, ref)
            est, se = mc_hypervolume(pts, ref, 2_000_000, seed=50 + trial,
                                     origin=np.zeros(2))
            assert abs(hv - est) <= 3 * se

    def test_dominated_points_ignored(self):
        gen = np.random.default_rng(9)
        pts = gen.uniform(size=(30, 2))
        ref = np.array([1.5, 1.5])
        mask = brute_force_front0_mask(pts)
        assert hypervolume_2d(pts, ref) == pytest.approx(
            hypervolume_2d(pts[mask], ref), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1,
                    max_size=12), st.tuples(st.floats(0, 1), st.floats(0, 1)))
    def test_monotone_under_insertion(self, points, extra):
        ref = np.array([1.1, 1.1])
        base = hypervolume_2d(np.array(points), ref)
        grown = hypervolume_2d(np.array(points + [extra]), ref)
        assert grown >= base - 1e-12

    def test_permutation_invariant(self):
        gen = np.random.default_rng(10)
        pts = gen.uniform(size=(20, 2))
        ref = np.array([1.5, 1.5])
        hv = hypervolume_2d(pts, ref)
        for _ in range(5):
            assert hypervolume_2d(gen.permutation(pts), ref) == pytest.approx(hv, abs=1e-12)


class TestSplitGamma:
    def test_size_rule(self):
        gen = np.random.default_rng(11)
        means = gen.uniform(size=(10, 2))
        part = nondominated_sort(means)
        split = split_gamma(part, means, 0.3, np.array([2.0, 2.0]))
        assert split.good.size == 3
        assert split.poor.size == 7
        assert sorted(np.concatenate([split.good, split.poor]).tolist()) == list(range(10))

    def test_whole_fronts_when_boundary_aligns(self):
        means = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0], [3.0, 3.0]])
        part = nondominated_sort(means)
        split = split_gamma(part, means, 0.5, np.array([4.0, 4.0]))
        assert split.good.tolist() == [0, 1]

    def test_boundary_tiebreak_picks_largest_contribution(self):
        means = np.array([[0.0, 3.0], [1.0, 1.0], [3.0, 0.0]])
        part = nondominated_sort(means)
        split = split_gamma(part, means, 0.3, np.array([4.0, 4.0]))
        assert split.good.tolist() == [1]

    def test_rank_ordering_except_boundary_front(self):
        gen = np.random.default_rng(12)
        means = gen.uniform(size=(40, 2))
        part = nondominated_sort(means)
        split = split_gamma(part, means, 0.35, np.array([2.0, 2.0]))
        ranks = part.ranks
        boundary = max(ranks[i] for i in split.good)
        for g in split.good:
            for p in split.poor:
                if ranks[g] != boundary and ranks[p] != boundary:
                    assert ranks[g] <= ranks[p]
        # all good members outrank all poor members strictly below the boundary
        assert all(ranks[p] >= boundary for p in split.poor)

    def test_gamma_validation(self):
        means = np.array([[0.0, 1.0], [1.0, 0.0]])
        part = nondominated_sort(means)
        with pytest.raises(ValueError):
            split_gamma(part, means, 0.0, np.array([2.0, 2.0]))
        with pytest.raises(ValueError):
            split_gamma(part, means, 1.0, np.array([2.0, 2.0]))


class TestParetoFront:
    def space(self):
        return SearchSpace.continuous(np.zeros(2), np.ones(2))

    def test_singleton_archive(self):
        archive = Archive(self.space(), 2)
        merge_observation(archive, np.array([0.5, 0.5]), [[1.0, 2.0], [3.0, 2.0]])
        front = pareto_front(archive)
        assert len(front) == 1
        assert np.allclose(front[0].mean, [2.0, 2.0])
        assert front[0].std[1] == 0.0

    def test_mutually_nondominated(self):
        archive = Archive(self.space(), 2)
        gen = np.random.default_rng(13)
        for i in range(5):
            f = np.array([i * 0.2, 1.0 - i * 0.2])
            merge_observation(archive, gen.uniform(size=2), [f, f])
        assert len(pareto_front(archive)) == 5

    def test_matches_pairwise_oracle(self):
        archive = Archive(self.space(), 2)
        gen = np.random.default_rng(14)
        for _ in range(50):
            merge_observation(archive, gen.uniform(size=2),
                              gen.normal(size=(3, 2)))
        mask = brute_force_front0_mask(archive.means())
        front = pareto_front(archive)
        assert len(front) == int(mask.sum())

    def test_empty_archive_rejected(self):
        with pytest.raises(ValueError):
            pareto_front(Archive(self.space(), 2))
