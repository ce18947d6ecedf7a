import numpy as np
import pytest

from gelflow.errors import InvalidInputError
from gelflow.gp import (
    KernelParams,
    build_model,
    evaluate_sample,
    kernel,
    predict,
    spectral_sample,
)


def make_model(rng, n=8, d=2, noise=0.01, nu=0.5):
    p = KernelParams(lengthscales=(0.5,) * d, signal_var=1.0, noise_var=noise, nu=nu)
    X = rng.random((n, d))
    y = np.sin(3 * X[:, 0]) + 0.5 * rng.standard_normal(n)
    return build_model(p, X, y)


def feature_kernel_error(model, m, seed, n_pairs=100):
    """Mean/max abs deviation of the cosine-feature inner product from the kernel."""
    s = spectral_sample(model, m, seed)
    rng = np.random.default_rng(seed + 999)
    A = rng.random((n_pairs, model.dim))
    B = rng.random((n_pairs, model.dim))
    phi = lambda Z: s.feature_scale * np.cos(Z @ s.frequencies.T + s.phases)
    approx = np.sum(phi(A) * phi(B), axis=1)
    exact = np.array([kernel(A[i], B[i], model.params) for i in range(n_pairs)])
    err = np.abs(approx - exact)
    return err.mean(), err.max()


class TestSpectralSample:
    def test_kernel_approximation_at_4000(self):
        rng = np.random.default_rng(0)
        model = make_model(rng)
        mean_err, max_err = feature_kernel_error(model, 4000, seed=3)
        assert mean_err <= 0.05
        assert max_err <= 0.05 * 4  # loose cap on the worst pair

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(1)
        model = make_model(rng)
        a = spectral_sample(model, 4000, seed=5)
        b = spectral_sample(model, 4000, seed=5)
        assert np.array_equal(a.frequencies, b.frequencies)
        assert np.array_equal(a.phases, b.phases)
        assert np.array_equal(a.weights, b.weights)
        x = rng.random(2)
        assert evaluate_sample(a, x) == evaluate_sample(b, x)

    def test_draw_mean_matches_posterior_mean(self):
        rng = np.random.default_rng(2)
        model = make_model(rng, n=6)
        x = np.array([0.35, 0.62])
        mean, var = predict(model, x)
        vals = [evaluate_sample(spectral_sample(model, 4000, seed=s), x) for s in range(200)]
        se = np.sqrt(var / 200)
        assert abs(np.mean(vals) - mean) <= 3 * se + 0.02  # small feature-bias allowance

    def test_error_decreases_with_m(self):
        rng = np.random.default_rng(3)
        model = make_model(rng)
        big = [feature_kernel_error(model, 4000, seed=s)[0] for s in range(20)]
        small = [feature_kernel_error(model, 250, seed=s)[0] for s in range(20)]
        assert np.mean(big) < np.mean(small)

    def test_zero_weights_return_training_mean(self):
        rng = np.random.default_rng(4)
        model = make_model(rng)
        s = spectral_sample(model, 64, seed=0)
        s = type(s)(
            frequencies=s.frequencies,
            phases=s.phases,
            weights=np.zeros_like(s.weights),
            feature_scale=s.feature_scale,
            scaling=s.scaling,
        )
        assert evaluate_sample(s, rng.random(2)) == pytest.approx(s.scaling.y_mean)

    def test_single_feature_closed_form(self):
        rng = np.random.default_rng(5)
        model = make_model(rng)
        s = spectral_sample(model, 1, seed=9)
        x = np.array([0.2, 0.7])
        expected = (
            s.feature_scale
            * s.weights[0]
            * np.cos(s.frequencies[0] @ x + s.phases[0])
            * s.scaling.y_std
            + s.scaling.y_mean
        )
        assert evaluate_sample(s, x) == pytest.approx(expected, abs=1e-8)

    def test_continuity_under_small_steps(self):
        rng = np.random.default_rng(6)
        model = make_model(rng)
        s = spectral_sample(model, 500, seed=1)
        x = rng.random(2)
        f0 = evaluate_sample(s, x)
        deltas = [1e-3, 1e-5, 1e-7]
        diffs = [abs(evaluate_sample(s, x + d) - f0) for d in deltas]
        assert diffs[0] > diffs[1] > diffs[2] or diffs[2] < 1e-9

    def test_matheron_and_primal_paths_match_in_mean(self):
        # m <= n uses the m x m posterior, m > n the n x n dual; both must
        # reproduce the GP posterior mean in expectation
        rng = np.random.default_rng(7)
        model = make_model(rng, n=40, noise=0.05)
        x = np.array([0.5, 0.5])
        mean, var = predict(model, x)
        small = [evaluate_sample(spectral_sample(model, 30, seed=s), x) for s in range(300)]
        big = [evaluate_sample(spectral_sample(model, 300, seed=s), x) for s in range(300)]
        # the small-m draw is a coarse kernel approximation; allow wider slack
        assert abs(np.mean(small) - mean) <= 5 * np.sqrt(var / 300) + 0.15
        assert abs(np.mean(big) - mean) <= 5 * np.sqrt(var / 300) + 0.05

    def test_invalid_feature_count(self):
        rng = np.random.default_rng(8)
        model = make_model(rng)
        with pytest.raises(InvalidInputError):
            spectral_sample(model, 0, seed=0)
