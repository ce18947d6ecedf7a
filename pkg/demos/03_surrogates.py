"""Fit the two Gaussian-process surrogates and inspect them.

Shows one-dimensional slices of mean and variance (the other inputs held
fixed), plus a handful of spectral posterior draws along the same slice:
the draws are the deterministic functions the genetic algorithm explores
during Thompson sampling.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from gelflow import CampaignConfig, spectral_sample
from gelflow.campaign import replay_fixture
from gelflow.gp import evaluate_sample_batch, predict_batch
from gelflow.tsemo import train_models

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

state = replay_fixture(CampaignConfig())
models = train_models(state.dataset(), state.config.bounds, state.config.tsemo)
names = ("product flow (negated)", "squared radius deviation")
for model, name in zip(models, names):
    print(f"{name}: lengthscales {np.round(model.params.lengthscales, 3)}, "
          f"signal {model.params.signal_var:.3f}, noise {model.params.noise_var:.2e}")

temps = np.linspace(60, 80, 120)
X = np.column_stack([np.full(120, 0.6), np.full(120, 8.0), np.full(120, 0.32), temps])

fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
for ax, model, name in zip(axes, models, names):
    mean, var = predict_batch(model, X, check_bounds=False)
    sd = np.sqrt(var)
    ax.fill_between(temps, mean - 2 * sd, mean + 2 * sd, alpha=0.25, label="mean +/- 2 sd")
    ax.plot(temps, mean, lw=2, label="posterior mean")
    for seed in range(3):
        draw = spectral_sample(model, 2000, seed=seed)
        ax.plot(temps, evaluate_sample_batch(draw, X), lw=0.8, alpha=0.8)
    ax.set_xlabel("temperature (C)")
    ax.set_title(name)
    ax.legend(fontsize=8)
fig.suptitle("surrogate slices at F_I=0.6, F_M=8.0, c_CTAB=0.32")
fig.tight_layout()
fig.savefig(OUT / "03_surrogates.png", dpi=130)
print(f"wrote {OUT / '03_surrogates.png'}")
