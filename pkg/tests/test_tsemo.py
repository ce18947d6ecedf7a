import numpy as np
import pytest

from conftest import mc_hypervolume
from gelflow.errors import InsufficientDataError
from gelflow.moo import hypervolume
from gelflow.process import Dataset, DatasetRow, DesignPoint, ObjectiveVector
from gelflow.tsemo import (
    hypervolume_improvement,
    sampled_pareto,
    suggest_batch,
    train_models,
)


def tiny_dataset():
    rows = (
        DatasetRow(0, DesignPoint(0.3, 5.0, 0.2, 65.0), ObjectiveVector(-3.0, 50.0, 5.0)),
        DatasetRow(0, DesignPoint(0.6, 9.0, 0.3, 70.0), ObjectiveVector(-5.0, 150.0, 10.0)),
    )
    return Dataset(rows)


class TestTrainModels:
    def test_fixture_models_interpolate_reasonably(self, si_models, si_dataset):
        rows = si_dataset.trainable().rows
        X = np.vstack([r.x.as_array() for r in rows])
        from gelflow.gp import predict_batch

        for model, col in zip(si_models, ("neg_product_flow", "sq_radius_dev")):
            y = np.array([getattr(r.y, col) for r in rows])
            mean, _ = predict_batch(model, X)
            sd_noise = np.sqrt(model.params.noise_var) * model.scaling.y_std
            assert np.all(np.abs(mean - y) <= 3 * sd_noise + 1e-6 * model.scaling.y_std)

    def test_all_rows_excluded_is_insufficient(self, fast_tsemo, bounds):
        rows = tuple(
            DatasetRow(r.iteration, r.x, r.y, excluded=True) for r in tiny_dataset().rows
        )
        with pytest.raises(InsufficientDataError):
            train_models(Dataset(rows), bounds, fast_tsemo)

    def test_two_row_minimum_fits(self, fast_tsemo, bounds):
        models = train_models(tiny_dataset(), bounds, fast_tsemo)
        assert models[0].n_train == 2
        assert models[1].n_train == 2


class TestSampledPareto:
    def test_deterministic(self, si_models, bounds, fast_tsemo):
        a = sampled_pareto(si_models, bounds, fast_tsemo, seed=11)
        b = sampled_pareto(si_models, bounds, fast_tsemo, seed=11)
        assert np.array_equal(a.objectives, b.objectives)
        assert np.array_equal(a.decisions, b.decisions)

    def test_temperature_objective_is_exact(self, si_models, bounds, fast_tsemo):
        front = sampled_pareto(si_models, bounds, fast_tsemo, seed=12)
        assert np.array_equal(front.objectives[:, 2], front.decisions[:, 3] - 60.0)

    def test_front_nondominated(self, si_models, bounds, fast_tsemo):
        sampled_pareto(si_models, bounds, fast_tsemo, seed=13).validate()


class TestHypervolumeImprovement:
    def test_dominated_candidate_zero(self):
        inc = [(1.0, 1.0), (0.0, 2.0)]
        assert hypervolume_improvement((1.5, 1.5), inc, (3.0, 3.0)) == 0.0

    def test_empty_incumbent_is_own_volume(self):
        assert hypervolume_improvement((1.0, 1.0), np.empty((0, 2)), (3.0, 3.0)) == 4.0

    def test_matches_monte_carlo(self):
        rng = np.random.default_rng(0)
        P = rng.random((10, 3))
        cand = rng.random(3) * 0.5
        ref = np.full(3, 1.5)
        hvi = hypervolume_improvement(cand, P, ref)
        mc_with = mc_hypervolume(np.vstack([P, cand]), ref, 400_000, seed=1)
        mc_without = mc_hypervolume(P, ref, 400_000, seed=1)
        assert hvi == pytest.approx(mc_with - mc_without, abs=0.01 * mc_with)


class TestSuggestBatch:
    def test_batch_shares_group_dims_within_bounds(self, si_dataset, bounds, fast_tsemo):
        rec = suggest_batch(si_dataset, bounds, fast_tsemo)
        assert len(rec.batch) == 5
        assert len({x.temp for x in rec.batch}) == 1
        assert len({x.c_ctab for x in rec.batch}) == 1
        for x in rec.batch:
            bounds.validate(x)

    def test_single_point_batch(self, si_dataset, bounds, fast_tsemo):
        from dataclasses import replace

        rec = suggest_batch(si_dataset, bounds, replace(fast_tsemo, batch_size=1))
        assert len(rec.batch) == 1

    def test_empty_dataset_insufficient(self, bounds, fast_tsemo):
        with pytest.raises(InsufficientDataError):
            suggest_batch(Dataset(()), bounds, fast_tsemo)

    def test_deterministic_per_seed(self, si_dataset, bounds, fast_tsemo):
        from dataclasses import replace

        cfg = replace(fast_tsemo, seed=77)
        assert suggest_batch(si_dataset, bounds, cfg) == suggest_batch(si_dataset, bounds, cfg)

    def test_excluded_rows_do_not_influence(self, si_dataset, bounds, fast_tsemo):
        base_rows = si_dataset.rows
        extra = DatasetRow(
            9,
            DesignPoint(0.5, 10.0, 0.2, 75.0),
            ObjectiveVector(0.0, 0.0, 15.0),
            excluded=True,
        )
        with_excluded = Dataset(base_rows + (extra,))
        a = suggest_batch(si_dataset, bounds, fast_tsemo)
        b = suggest_batch(with_excluded, bounds, fast_tsemo)
        assert a == b

    def test_greedy_hypervolume_nondecreasing(self, si_dataset, bounds, fast_tsemo):
        rec = suggest_batch(si_dataset, bounds, fast_tsemo)
        data = si_dataset.trainable().objective_matrix()
        lo = data.min(axis=0)
        span = np.where(data.max(axis=0) - lo > 0, data.max(axis=0) - lo, 1.0)
        ref = np.full(3, 1.1)
        inc = (data - lo) / span
        hv = hypervolume(inc, ref)
        for y in rec.predicted:
            inc = np.vstack([inc, (y.as_array() - lo) / span])
            new_hv = hypervolume(inc, ref)
            assert new_hv >= hv - 1e-12
            hv = new_hv

    def test_predictions_carry_uncertainties(self, si_dataset, bounds, fast_tsemo):
        rec = suggest_batch(si_dataset, bounds, fast_tsemo)
        for y in rec.predicted:
            assert y.sigma is not None
            assert y.sigma[0] >= 0 and y.sigma[1] >= 0 and y.sigma[2] == 0.0

    def test_per_point_redraw_option(self, si_dataset, bounds, fast_tsemo):
        from dataclasses import replace

        cfg = replace(fast_tsemo, redraw_per_point=True)
        rec = suggest_batch(si_dataset, bounds, cfg)
        assert len(rec.batch) == 5
        assert len({x.temp for x in rec.batch}) == 1
        assert len({x.c_ctab for x in rec.batch}) == 1
        assert suggest_batch(si_dataset, bounds, cfg) == rec  # still deterministic
