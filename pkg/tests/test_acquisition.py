import numpy as np
import pytest

from mobokit.acquisition import (MeiContext, PsoConfig, _mei_from_moments,
                                 build_mei_context, mei, mei_batch,
                                 pso_maximize, select_infill_gp_motpe,
                                 select_infill_gp_pso)
from mobokit.core import Archive, RngStream, SearchSpace, merge_observation
from mobokit.gp import make_model
from mobokit.pareto import SplitResult, nondominated_sort, split_gamma
from mobokit.scalarize import WeightVector, build_scalarized_dataset
from mobokit.tpe import (TpeDensityPair, build_density_pair, sample_candidates,
                         aggregated_scores)

from oracles import mc_expected_improvement

PHI0 = 0.3989422804014327  # standard normal density at zero


def space_of(d):
    return SearchSpace.continuous(np.zeros(d), np.ones(d))


def fitted_setup(n=15, d=2, seed=0):
    gen = np.random.default_rng(seed)
    archive = Archive(space_of(d), 2)
    for _ in range(n):
        x = gen.uniform(size=d)
        f = np.array([x.sum(), (1 - x).sum()])
        merge_observation(archive, x, f + 0.05 * gen.standard_normal((5, 2)))
    ds = build_scalarized_dataset(archive, WeightVector(np.array([0.5, 0.5])))
    model = make_model(ds, archive.space, np.full(d, 5.0), 1.0)
    return archive, ds, model


class TestMeiFormula:
    def test_symmetric_case_is_phi_zero(self):
        v = _mei_from_moments(1.0, np.array([1.0]), np.array([1.0]))
        assert v[0] == pytest.approx(PHI0, abs=1e-12)

    def test_degenerate_std_worse_mean(self):
        v = _mei_from_moments(1.0, np.array([2.0]), np.array([0.0]))
        assert v[0] == 0.0

    def test_degenerate_std_better_mean(self):
        v = _mei_from_moments(1.0, np.array([0.25]), np.array([0.0]))
        assert v[0] == pytest.approx(0.75)

    def test_matches_monte_carlo(self):
        gen = np.random.default_rng(1)
        for k in range(10):
            z = gen.uniform(-1, 1)
            mean = z + gen.uniform(-1.5, 1.5)
            std = gen.uniform(0.05, 0.8)
            closed = _mei_from_moments(z, np.array([mean]), np.array([std]))[0]
            mc = mc_expected_improvement(z, mean, std, 400_000, seed=100 + k)
            assert closed == pytest.approx(mc, abs=3e-3)

    def test_nonnegative_and_monotone_in_std(self):
        stds = np.array([0.0, 0.1, 0.5, 1.0, 2.0])
        vals = _mei_from_moments(0.3, np.full(5, 0.3), stds)
        assert np.all(vals >= 0.0)
        assert np.all(np.diff(vals) > 0.0)

    def test_context_uses_prediction_at_best_mean(self):
        archive, ds, model = fitted_setup()
        ctx = build_mei_context(model, ds)
        i_min = int(np.argmin(ds.scalar_mean))
        assert np.array_equal(ctx.x_min, ds.points[i_min])
        from mobokit.gp import predict
        assert ctx.z_min == pytest.approx(predict(model, ctx.x_min).mean)

    def test_mei_single_matches_batch(self):
        archive, ds, model = fitted_setup(seed=2)
        ctx = build_mei_context(model, ds)
        gen = np.random.default_rng(3)
        X = gen.uniform(size=(10, 2))
        batch = mei_batch(ctx, X)
        for x, v in zip(X, batch):
            assert mei(ctx, x) == pytest.approx(v, abs=1e-14)


class TestSelectInfillMotpe:
    def build_pair(self, archive, gamma=0.3):
        means = archive.means()
        split = split_gamma(nondominated_sort(means), means, gamma,
                            np.array([5.0, 5.0]))
        return build_density_pair(archive, split, archive.space)

    def test_matches_exhaustive_argmax(self):
        archive, ds, model = fitted_setup(n=20, seed=4)
        ctx = build_mei_context(model, ds)
        pair = self.build_pair(archive)
        rng = RngStream(5)
        point, fallback = select_infill_gp_motpe(ctx, pair, 300, rng)
        assert not fallback
        cand = sample_candidates(pair, 300, rng)  # same stream, same draws
        scores = aggregated_scores(pair, cand)
        q = cand[scores > 0.0]
        values = mei_batch(ctx, q)
        assert np.array_equal(point, q[int(np.argmax(values))])

    def test_fallback_when_no_positive_score(self):
        archive, ds, model = fitted_setup(n=12, seed=6)
        ctx = build_mei_context(model, ds)
        idx = np.arange(len(archive))
        pair = build_density_pair(archive, SplitResult(idx, idx, 0.5),
                                  archive.space)  # l == g -> AS = 0 everywhere
        rng = RngStream(7)
        point, fallback = select_infill_gp_motpe(ctx, pair, 100, rng)
        assert fallback
        cand = sample_candidates(pair, 100, rng)
        assert np.array_equal(point, cand[0])  # all-zero scores tie to index 0

    def test_singleton_q_ignores_mei(self):
        space = space_of(1)

        class FakeEstimator:
            def __init__(self, logpdf):
                self._logpdf = logpdf

            def sample(self, n, gen):
                return np.linspace(0.05, 0.95, n)

            def logpdf(self, xs):
                return self._logpdf(np.atleast_1d(xs))

        l = FakeEstimator(lambda xs: np.zeros(xs.size))
        special = 0.05 + 2 * (0.95 - 0.05) / 9  # third of 10 linspace values
        g = FakeEstimator(
            lambda xs: np.where(np.isclose(xs, special), -1.0, 0.0))
        pair = TpeDensityPair(space, (l,), (g,))
        archive, ds, model = fitted_setup(n=10, d=1, seed=8)
        ctx = build_mei_context(model, ds)
        point, fallback = select_infill_gp_motpe(ctx, pair, 10, RngStream(9))
        assert not fallback
        assert point[0] == pytest.approx(special)

    def test_output_in_bounds_with_positive_score(self):
        archive, ds, model = fitted_setup(n=25, seed=10)
        ctx = build_mei_context(model, ds)
        pair = self.build_pair(archive)
        for k in range(5):
            point, fallback = select_infill_gp_motpe(ctx, pair, 500,
                                                     RngStream(11).child(k))
            assert archive.space.contains(point)
            if not fallback:
                assert aggregated_scores(pair, point[None, :])[0] > 0.0


class TestPso:
    def test_recovers_sphere_center(self):
        space = space_of(5)
        center = np.full(5, 0.5)

        def neg_sphere(X):
            return -np.sum((X - center) ** 2, axis=1)

        cfg = PsoConfig(swarm=120, iters=600, stall_iters=100)
        best, _ = pso_maximize(neg_sphere, space, cfg, RngStream(12))
        assert np.all(np.abs(best - center) < 1e-3)

    def test_dominates_random_probe(self):
        archive, ds, model = fitted_setup(n=18, seed=13)
        ctx = build_mei_context(model, ds)
        cfg = PsoConfig(swarm=80, iters=300, stall_iters=80)
        best = select_infill_gp_pso(ctx, archive.space, cfg, RngStream(14))
        gen = np.random.default_rng(15)
        probe = gen.uniform(size=(10_000, 2))
        assert mei(ctx, best) >= mei_batch(ctx, probe).max() - 1e-12

    def test_default_table_settings(self):
        cfg = PsoConfig()
        assert (cfg.swarm, cfg.iters) == (300, 1800)
        assert (cfg.cognitive, cfg.social, cfg.inertia) == (0.5, 0.3, 0.9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PsoConfig(swarm=1)
