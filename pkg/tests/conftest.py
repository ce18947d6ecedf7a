import numpy as np
import pytest

from gelflow import CampaignConfig, DEFAULT_BOUNDS, FitConfig, TsemoConfig
from gelflow.campaign import replay_fixture
from gelflow.tsemo import train_models


@pytest.fixture(scope="session")
def si_state():
    return replay_fixture(CampaignConfig())


@pytest.fixture(scope="session")
def si_dataset(si_state):
    return si_state.dataset()


@pytest.fixture(scope="session")
def bounds():
    return DEFAULT_BOUNDS


@pytest.fixture(scope="session")
def si_models(si_dataset, bounds):
    """GPs fitted on the bundled campaign data with the pinned fit seed."""
    return train_models(si_dataset, bounds, TsemoConfig())


@pytest.fixture
def fast_tsemo():
    """Small-budget suggestion config for loop-machinery tests."""
    return TsemoConfig(
        spectral_points=500,
        ga_generations=60,
        ga_population=40,
        fit=FitConfig(restarts=4, seed=2),
    )


def brute_force_fronts(F):
    """O(n^2 k) non-dominated peeling, independent of the library sort."""
    F = np.asarray(F, dtype=float)
    remaining = np.arange(len(F))
    fronts = []
    while remaining.size:
        sub = F[remaining]
        dominated = np.zeros(len(sub), dtype=bool)
        for j in range(len(sub)):
            dom = np.all(sub <= sub[j], axis=1) & np.any(sub < sub[j], axis=1)
            dominated[j] = bool(np.any(dom))
        front = remaining[~dominated]
        fronts.append(sorted(front.tolist()))
        remaining = remaining[dominated]
    return fronts


def mc_hypervolume(points, ref, n_samples, seed):
    """Monte-Carlo estimate of the dominated volume inside [min(P), ref]."""
    P = np.asarray(points, dtype=float)
    ref = np.asarray(ref, dtype=float)
    P = P[np.all(P <= ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    lo = P.min(axis=0)
    rng = np.random.default_rng(seed)
    samples = lo + rng.random((n_samples, len(ref))) * (ref - lo)
    dominated = np.zeros(n_samples, dtype=bool)
    for p in P:
        dominated |= np.all(p <= samples, axis=1)
    return dominated.mean() * np.prod(ref - lo)
